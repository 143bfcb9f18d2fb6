"""Command line front end.

JSON reports go to stdout, a short human summary to stderr.  Exit codes:
0 success, 1 verification failure, 2 input or domain error, 3 I/O error.
Infinities are serialized as the strings "inf" / "-inf".
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from . import __version__
from .cloud import GridSpec, export, self_intersections, sphere, wavefront
from .conjugate import nth_conjugate_bracket, refine_conjugate_time
from .elliptic import DomainError
from .expmap import clock, exp, rectify
from .phase import CaseClass, CaseId, PhasePoint, classify, phase_point
from .strata import (
    cut_time_upper_bound,
    first_maxwell_time,
    limit_conjugate_flags,
    maxwell_membership,
    nth_maxwell_time,
)
from .verify import SUITES, run_suite

__all__ = ["main"]


@dataclass
class Report:
    command: str
    inputs: dict
    outputs: dict
    residuals: dict | None = None
    exit_code: int = 0

    def to_json(self) -> dict:
        doc = {
            "command": self.command,
            "inputs": _jsonable(self.inputs),
            "outputs": _jsonable(self.outputs),
            "version": __version__,
        }
        if self.residuals is not None:
            doc["residuals"] = _jsonable(self.residuals)
        return doc


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {key: _jsonable(val) for key, val in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
    return v


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- covector

def _add_covector_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--gamma", type=float, help="pendulum angle of the covector")
    sub.add_argument("--c", type=float, help="pendulum velocity of the covector")
    sub.add_argument("--case", choices=[c.value for c in CaseId], help="stratum label")
    sub.add_argument("--k", type=float, help="modulus in (0, 1); C1/C2 only")
    sub.add_argument("--phi", type=float, default=0.0, help="elliptic phase (default 0)")
    sub.add_argument("--s1", type=int, choices=(-1, 1), default=1)
    sub.add_argument("--s2", type=int, choices=(-1, 1), default=1)
    sub.add_argument("--tol", type=float, default=1e-10, help="stratum classification tolerance")


def _covector_from_args(args: argparse.Namespace) -> tuple[CaseClass, dict]:
    by_angle = args.gamma is not None or args.c is not None
    by_case = args.case is not None
    if by_angle == by_case:
        raise DomainError("give a covector either as --gamma/--c or as --case/--k/--phi/--s1/--s2")
    if by_angle:
        if args.gamma is None or args.c is None:
            raise DomainError("--gamma and --c must be given together")
        case = classify(PhasePoint(args.gamma, args.c), tol=args.tol)
        inputs = {"gamma": args.gamma, "c": args.c}
        return case, inputs

    cid = CaseId(args.case)
    if cid in (CaseId.C1, CaseId.C2):
        if args.k is None:
            raise DomainError(f"--k is required for {cid.value}")
        if not 0.0 < args.k < 1.0:
            raise DomainError(f"--k must satisfy 0 < k < 1 for {cid.value}; got {args.k!r}")
        case = CaseClass(cid, args.k, args.phi, args.s1, args.s2)
    elif cid is CaseId.C3:
        case = CaseClass(cid, 1.0, args.phi, args.s1, args.s2)
    elif cid is CaseId.C4:
        case = CaseClass(cid, 0.0, 0.0, args.s1, args.s2)
    else:
        case = CaseClass(cid, 1.0, 0.0, args.s1, args.s2)
    inputs = {"case": cid.value, "k": args.k, "phi": args.phi, "s1": args.s1, "s2": args.s2}
    return case, inputs


def _case_record(case: CaseClass) -> dict:
    return {
        "case": case.case_id.value,
        "k": case.k,
        "phi": case.phi,
        "s1": case.s1,
        "s2": case.s2,
    }


# ---------------------------------------------------------------- commands

def _cmd_exp(args: argparse.Namespace) -> Report:
    case, inputs = _covector_from_args(args)
    inputs["t"] = args.t
    q = exp(case, args.t)
    r1, r2 = rectify(q)
    out: dict = {
        "case": _case_record(case),
        "q": {"x": q.x, "y": q.y, "z": q.z},
        "rectified": {"r1": r1, "r2": r2},
    }
    if case.case_id in (CaseId.C1, CaseId.C2, CaseId.C3):
        clk = clock(case, args.t)
        out["clock"] = {"p": clk.p, "tau": clk.tau}
    else:
        out["clock"] = None
    lam = phase_point(case)
    out["covector"] = {"gamma": lam.gamma, "c": lam.c}
    _say(
        f"{case.case_id.value} geodesic at t={args.t:g}: "
        f"q = ({q.x:.12g}, {q.y:.12g}, {q.z:.12g})"
    )
    return Report("exp", inputs, out)


def _cmd_maxwell(args: argparse.Namespace) -> Report:
    case, inputs = _covector_from_args(args)
    inputs["n"] = args.n
    t1 = first_maxwell_time(case)
    out: dict = {
        "case": _case_record(case),
        "first_maxwell_time": t1,
        "cut_time_upper_bound": cut_time_upper_bound(case),
        "times": [],
    }
    if case.case_id in (CaseId.C1, CaseId.C2):
        for m in range(1, args.n + 1):
            t = nth_maxwell_time(case, m)
            out["times"].append(
                {
                    "index": m,
                    "t": t,
                    "strata": sorted(maxwell_membership(case, t)),
                    "limit_conjugate": limit_conjugate_flags(case, t),
                }
            )
        _say(
            f"{case.case_id.value}: first Maxwell time {t1:.12g}; "
            + ", ".join(f"t_{e['index']}={e['t']:.9g}" for e in out["times"])
        )
    else:
        _say(f"{case.case_id.value}: no Maxwell points; cut time bound is inf")
    return Report("maxwell", inputs, out)


def _cmd_conjugate(args: argparse.Namespace) -> Report:
    case, inputs = _covector_from_args(args)
    inputs["n"] = args.n
    out: dict = {"case": _case_record(case)}
    if case.case_id in (CaseId.C3, CaseId.C5):
        out["no_conjugate_points"] = True
        _say(f"{case.case_id.value}: no conjugate points")
        return Report("conjugate", inputs, out)

    entries = []
    for m in range(1, args.n + 1):
        br = nth_conjugate_bracket(case, m)
        t = refine_conjugate_time(case, m)
        entry: dict = {"index": m, "bracket": [br.lo, br.hi], "t": t}
        if case.case_id in (CaseId.C1, CaseId.C2):
            lo = nth_maxwell_time(case, m)
            hi = nth_maxwell_time(case, m + 1)
            entry["interleaving_ok"] = bool(lo - 1e-12 <= t <= hi + 1e-12)
        else:
            entry["interleaving_ok"] = None
        entries.append(entry)
    out["times"] = entries
    _say(
        f"{case.case_id.value}: "
        + ", ".join(f"t_{e['index']}^conj={e['t']:.9g}" for e in entries)
    )
    return Report("conjugate", inputs, out)


def _parse_grid(text: str) -> GridSpec:
    try:
        a, b = text.lower().split("x")
        return GridSpec(n_k=int(a), n_phi=int(b))
    except ValueError as err:
        raise DomainError(f"--grid expects GxH (e.g. 200x400); got {text!r}") from err


def _cmd_front(args: argparse.Namespace) -> Report:
    if not args.radius > 0.0:
        raise DomainError(f"--radius must be positive; got {args.radius!r}")
    grid = _parse_grid(args.grid)
    started = time.perf_counter()
    cloud = (sphere if args.sphere else wavefront)(args.radius, grid)
    count = export(cloud, args.format, args.out)
    elapsed = time.perf_counter() - started
    inputs = {
        "radius": args.radius,
        "grid": args.grid,
        "format": args.format,
        "out": args.out,
        "sphere": bool(args.sphere),
    }
    out: dict = {
        "points": count,
        "path": args.out,
        "format": args.format,
        "sphere": bool(args.sphere),
        "elapsed_s": elapsed,
    }
    if args.diagnose:
        rep = self_intersections(cloud, eps=args.eps)
        out["self_intersections"] = rep.summary()
    kind = "sphere" if args.sphere else "wavefront"
    _say(f"wrote {count} {kind} points (R={args.radius:g}) to {args.out} in {elapsed:.2f}s")
    return Report("front", inputs, out)


def _cmd_verify(args: argparse.Namespace) -> Report:
    names = SUITES if args.suite == "all" else (args.suite,)
    suites = []
    residuals: dict = {}
    ok = True
    for name in names:
        rep = run_suite(name)
        suites.append(rep.to_dict())
        for chk in rep.checks:
            residuals[f"{name}.{chk.name}"] = chk.residual
            mark = "ok  " if chk.passed else "FAIL"
            _say(f"{mark} {name}.{chk.name}: residual {chk.residual:.3e} (<= {chk.threshold:.0e})")
        ok = ok and rep.passed
    _say("verify: all suites passed" if ok else "verify: FAILURE")
    return Report(
        "verify",
        {"suite": args.suite},
        {"suites": suites, "passed": ok},
        residuals=residuals,
        exit_code=0 if ok else 1,
    )


# ---------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shgeo",
        description="Geodesics of the hyperbolic-motions group: closed-form "
        "exponential map, Maxwell and conjugate times, wavefront clouds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_exp = subs.add_parser("exp", help="evaluate the exponential map")
    _add_covector_args(p_exp)
    p_exp.add_argument("--t", type=float, required=True, help="arc length")
    p_exp.set_defaults(handler=_cmd_exp)

    p_max = subs.add_parser("maxwell", help="Maxwell times and strata")
    _add_covector_args(p_max)
    p_max.add_argument("--n", type=int, default=1, help="how many times to list")
    p_max.set_defaults(handler=_cmd_maxwell)

    p_con = subs.add_parser("conjugate", help="conjugate time brackets and refinement")
    _add_covector_args(p_con)
    p_con.add_argument("--n", type=int, default=1, help="how many times to list")
    p_con.set_defaults(handler=_cmd_conjugate)

    p_fr = subs.add_parser("front", help="sample a wavefront or sphere cloud and export it")
    p_fr.add_argument("--radius", type=float, required=True)
    p_fr.add_argument("--grid", default="200x400", help="modulus x angular resolution (GxH)")
    p_fr.add_argument("--format", choices=("csv", "ply", "json"), default="csv")
    p_fr.add_argument("--out", required=True, help="output path")
    p_fr.add_argument("--sphere", action="store_true", help="filter by the cut time upper bound")
    p_fr.add_argument("--diagnose", action="store_true", help="report self-intersection clusters")
    p_fr.add_argument("--eps", type=float, default=1e-3, help="pair distance for --diagnose")
    p_fr.set_defaults(handler=_cmd_front)

    p_ver = subs.add_parser("verify", help="run the invariant suites")
    p_ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p_ver.set_defaults(handler=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except DomainError as err:
        _say(f"error: {err}")
        return 2
    except OSError as err:
        _say(f"error: {err}")
        return 3
    print(json.dumps(report.to_json(), indent=2))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
