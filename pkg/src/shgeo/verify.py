"""Invariant suites: elliptic, ode, jacobian, strata, interleaving.

Each suite evaluates a fixed, deterministic battery of residual checks
and reports the worst residual per check against a stated threshold.
These are runtime self-checks behind ``shgeo verify``; the test suite
carries its own independently derived oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conjugate import j1, jacobian, refine_conjugate_time
from .elliptic import (
    MODULUS_CAP,
    am,
    complete_E,
    complete_K,
    incomplete_E,
    incomplete_F,
    jacobi,
)
from .expmap import clock, exp, rectify, trajectory_identities
from .phase import CaseClass, CaseId, classify, energy, phase_point
from .strata import (
    cut_time_upper_bound,
    f1,
    f2,
    f3,
    f4,
    first_maxwell_time,
    nth_maxwell_time,
    root_p1,
    root_p2,
)

__all__ = ["CheckResult", "SuiteReport", "run_suite", "SUITES"]

SUITES = ("elliptic", "ode", "jacobian", "strata", "interleaving")


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    threshold: float

    def __post_init__(self) -> None:
        # numpy scalars sneak in from vectorised suites; pin the contract
        # to plain floats so downstream JSON encoding never sees them.
        object.__setattr__(self, "residual", float(self.residual))
        object.__setattr__(self, "threshold", float(self.threshold))

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checks": [c.to_dict() for c in self.checks],
        }


# ---------------------------------------------------------------- samples

def _covector_sample() -> list[CaseClass]:
    """Deterministic covectors covering all five strata."""
    out: list[CaseClass] = []
    for i, k in enumerate(np.linspace(0.08, 0.92, 6)):
        K = complete_K(k)
        phi = (0.37 + 0.61 * i) % 1.0 * 4.0 * K
        out.append(CaseClass(CaseId.C1, float(k), float(phi), 1 - 2 * (i % 2), 1))
    for i, k in enumerate(np.linspace(0.15, 0.85, 6)):
        K = complete_K(k)
        psi = (0.11 + 0.53 * i) % 1.0 * 4.0 * K
        out.append(CaseClass(CaseId.C2, float(k), float(psi), 1, 1 - 2 * (i % 2)))
    for i, phi in enumerate(np.linspace(-2.0, 2.0, 4)):
        out.append(CaseClass(CaseId.C3, 1.0, float(phi), 1 - 2 * (i % 2), 1 - 2 * ((i // 2) % 2)))
    out.append(CaseClass(CaseId.C4, 0.0, 0.0, 1, 1))
    out.append(CaseClass(CaseId.C4, 0.0, 0.0, -1, 1))
    out.append(CaseClass(CaseId.C5, 1.0, 0.0, 1, 1))
    out.append(CaseClass(CaseId.C5, 1.0, 0.0, 1, -1))
    return out


def _rk4_endpoint(gamma0: float, c0: float, t: float, steps: int) -> tuple[float, float, float]:
    """Integrate the geodesic system from the origin with classic RK4."""

    def rhs(s):
        x, y, z, g, c = s
        half = 0.5 * g
        return np.array(
            [math.cos(half) * math.cosh(z), math.cos(half) * math.sinh(z), math.sin(half), c, -math.sin(g)]
        )

    h = t / steps
    s = np.array([0.0, 0.0, 0.0, gamma0, c0])
    for _ in range(steps):
        k1 = rhs(s)
        k2 = rhs(s + 0.5 * h * k1)
        k3 = rhs(s + 0.5 * h * k2)
        k4 = rhs(s + h * k3)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return float(s[0]), float(s[1]), float(s[2])


# ---------------------------------------------------------------- suites

def _suite_elliptic() -> SuiteReport:
    rep = SuiteReport("elliptic")
    u = np.linspace(-8.3, 8.3, 101)
    ks = np.concatenate([np.linspace(1e-6, 0.999, 99), [MODULUS_CAP]])
    worst_sc = 0.0
    worst_dn = 0.0
    worst_rt = 0.0
    worst_per = 0.0
    for k in ks:
        sn, cn, dn = jacobi(u, float(k))
        worst_sc = max(worst_sc, float(np.max(np.abs(sn * sn + cn * cn - 1.0))))
        worst_dn = max(worst_dn, float(np.max(np.abs(dn * dn + (k * sn) ** 2 - 1.0))))
        back = incomplete_F(am(u, float(k)), float(k))
        worst_rt = max(worst_rt, float(np.max(np.abs(back - u) / (1.0 + np.abs(u)))))
        K = complete_K(float(k))
        E = complete_E(float(k))
        per = incomplete_E(u + 2.0 * K, float(k)) - incomplete_E(u, float(k)) - 2.0 * E
        worst_per = max(worst_per, float(np.max(np.abs(per))))
    rep.checks.append(CheckResult("pythagorean-sn-cn", worst_sc, 1e-12))
    rep.checks.append(CheckResult("pythagorean-dn", worst_dn, 1e-12))
    rep.checks.append(CheckResult("am-F-roundtrip", worst_rt, 1e-11))
    rep.checks.append(CheckResult("incomplete-E-periodicity", worst_per, 1e-11))

    # Legendre relation E K' + E' K - K K' = pi/2
    worst_leg = 0.0
    for k in np.linspace(0.05, 0.95, 19):
        kp = math.sqrt((1.0 - k) * (1.0 + k))
        r = complete_E(k) * complete_K(kp) + complete_E(kp) * complete_K(k) - complete_K(k) * complete_K(kp)
        worst_leg = max(worst_leg, abs(r - math.pi / 2.0))
    rep.checks.append(CheckResult("legendre-relation", worst_leg, 1e-12))

    sn0, cn0, dn0 = jacobi(u, 0.0)
    trig = max(
        float(np.max(np.abs(sn0 - np.sin(u)))),
        float(np.max(np.abs(cn0 - np.cos(u)))),
        float(np.max(np.abs(dn0 - 1.0))),
        abs(complete_K(0.0) - math.pi / 2.0),
        abs(complete_E(0.0) - math.pi / 2.0),
    )
    rep.checks.append(CheckResult("degenerate-k0-trig", trig, 1e-12))
    return rep


def _suite_ode() -> SuiteReport:
    rep = SuiteReport("ode")
    sample = _covector_sample()

    # pendulum convention: d(gamma)/dt = c, d(c)/dt = -sin(gamma)
    h = 1e-5
    worst_conv = 0.0
    worst_energy = 0.0
    for case in sample:
        lam0 = phase_point(case)
        for t in (0.4, 1.7, 5.2):
            gm, cm = _pend(case, t - h)
            gp, cp = _pend(case, t + h)
            g0, c0 = _pend(case, t)
            worst_conv = max(
                worst_conv,
                abs((gp - gm) / (2.0 * h) - c0),
                abs((cp - cm) / (2.0 * h) + math.sin(g0)),
            )
            worst_energy = max(worst_energy, abs(0.5 * c0 * c0 - math.cos(g0) - energy(lam0)))
    rep.checks.append(CheckResult("pendulum-convention-fd", worst_conv, 1e-6))
    rep.checks.append(CheckResult("energy-conservation", worst_energy, 1e-10))

    worst_exp = 0.0
    for case in sample:
        lam0 = phase_point(case)
        for t in (0.5, 1.0, 3.0, 7.0):
            q = exp(case, t)
            ref = _rk4_endpoint(lam0.gamma, lam0.c, t, max(200, int(t * 1000)))
            worst_exp = max(worst_exp, max(abs(a - b) for a, b in zip(q, ref)))
    rep.checks.append(CheckResult("closed-form-vs-rk4", worst_exp, 1e-7))

    worst_cls = 0.0
    for case in sample:
        if case.case_id in (CaseId.C4, CaseId.C5):
            continue
        back = classify(phase_point(case))
        dphi = abs(back.phi - case.phi)
        worst_cls = max(worst_cls, abs(back.k - case.k), dphi)
        if back.case_id is not case.case_id:
            worst_cls = math.inf
    rep.checks.append(CheckResult("classification-roundtrip", worst_cls, 1e-9))

    worst_id = 0.0
    for case in sample:
        if case.case_id in (CaseId.C4, CaseId.C5):
            continue
        for t in (0.5, 1.3, 2.9, 6.1):
            q = exp(case, t)
            r1, r2 = rectify(q)
            rec = trajectory_identities(clock(case, t), case.s1, case.s2)
            worst_id = max(
                worst_id,
                abs(rec.r1 - r1),
                abs(rec.r2 - r2),
                abs(rec.sinh_z - math.sinh(q.z)),
            )
    rep.checks.append(CheckResult("trajectory-identities", worst_id, 1e-9))
    return rep


def _pend(case: CaseClass, t: float) -> tuple[float, float]:
    from .phase import pendulum_state

    return pendulum_state(case, t)


def _suite_jacobian() -> SuiteReport:
    rep = SuiteReport("jacobian")

    # closed form of j1 at p = 2nK
    worst_deg = 0.0
    for k in np.linspace(0.1, 0.9, 9):
        K = complete_K(float(k))
        E = complete_E(float(k))
        for n in (1, 2, 3):
            for tau in np.linspace(0.2, 3.7, 8):
                sn, _, _ = jacobi(float(tau), float(k))
                want = 16.0 * n * n * k * E * (E - (1.0 - k * k) * K) * sn * sn
                worst_deg = max(worst_deg, abs(j1(2.0 * n * K, float(tau), float(k)) - want))
    rep.checks.append(CheckResult("degenerate-p-closed-form", worst_deg, 1e-9))

    k = 1e-4
    worst_lim = 0.0
    for p in np.linspace(0.1, 3.0, 30):
        want = 4.0 * math.sin(p) * (math.sin(p) - p * math.cos(p))
        got = j1(p, p + 0.7, k) / k
        worst_lim = max(worst_lim, abs(got - want) / max(1.0, abs(want)))
    rep.checks.append(CheckResult("small-k-limit", worst_lim, 1e-3))

    for cid, name in ((CaseId.C1, "fd-determinant-c1"), (CaseId.C2, "fd-determinant-c2")):
        worst_fd = 0.0
        for i, k in enumerate(np.linspace(0.15, 0.85, 8)):
            K = complete_K(float(k))
            phi = (0.23 + 0.41 * i) % 1.0 * 4.0 * K
            case = CaseClass(cid, float(k), float(phi), 1, 1)
            for t in (0.8, 2.1, 4.4, 6.7):
                ana = jacobian(case, t).j
                if abs(ana) < 1e-6:
                    continue
                fd = _fd_det(case, t)
                worst_fd = max(worst_fd, abs(fd - ana) / abs(ana))
        rep.checks.append(CheckResult(name, worst_fd, 1e-4))

    worst_sym = 0.0
    for k in np.linspace(0.2, 0.8, 7):
        case = CaseClass(CaseId.C2, float(k), 0.9, 1, 1)
        for t in (1.0, 3.0):
            clk = clock(case, t)
            sn_p, _, _ = jacobi(clk.p, case.k)
            sn_t, _, _ = jacobi(clk.tau, case.k)
            delta = 1.0 - (case.k * sn_p * sn_t) ** 2
            base = j1(clk.p, clk.tau, case.k) / ((1.0 - case.k**2) ** 2 * delta)
            worst_sym = max(worst_sym, abs(jacobian(case, t).j + case.k * base))
    rep.checks.append(CheckResult("c2-scaling", worst_sym, 1e-13))
    return rep


def _fd_det(case: CaseClass, t: float, h: float = 1e-5) -> float:
    """Central finite-difference determinant of (phi, k, t) -> (x, y, z)."""

    def q(phi, k, tt):
        return np.array(exp(CaseClass(case.case_id, k, phi, case.s1, case.s2), tt))

    cols = []
    base = [case.phi, case.k, t]
    for which in range(3):
        hi = base.copy()
        lo = base.copy()
        hi[which] += h
        lo[which] -= h
        cols.append((q(*hi) - q(*lo)) / (2.0 * h))
    return float(np.linalg.det(np.column_stack(cols)))


def _suite_strata() -> SuiteReport:
    rep = SuiteReport("strata")

    worst_res = 0.0
    worst_br = 0.0
    for k in np.linspace(0.05, 0.95, 19):
        K = complete_K(float(k))
        for n in range(1, 7):
            for root, fn in ((root_p1(n, float(k)), f1), (root_p2(n, float(k)), f4)):
                lo, hi = 2 * n * K, (2 * n + 1) * K
                if not (lo < root < hi):
                    worst_br = math.inf
                scale = max(1.0, abs(fn(lo, float(k))), abs(fn(hi, float(k))))
                worst_res = max(worst_res, abs(float(fn(root, float(k)))) / scale)
    rep.checks.append(CheckResult("root-bracket-containment", worst_br, 0.0))
    rep.checks.append(CheckResult("root-residual", worst_res, 1e-12))

    worst_sign = 0.0
    for k in np.linspace(0.05, 0.95, 10):
        p = np.linspace(1e-3, 6.0 * complete_K(float(k)), 400)
        worst_sign = max(worst_sign, float(np.max(-f2(p, float(k)))), float(np.max(f3(p, float(k)))))
    rep.checks.append(CheckResult("f2-positive-f3-negative", worst_sign, 0.0))

    worst_max = 0.0
    for k in np.linspace(0.1, 0.9, 9):
        c1 = CaseClass(CaseId.C1, float(k), 0.3, 1, 1)
        c2 = CaseClass(CaseId.C2, float(k), 0.3, 1, 1)
        K = complete_K(float(k))
        worst_max = max(
            worst_max,
            abs(first_maxwell_time(c1) - 4.0 * K),
            abs(first_maxwell_time(c2) - 4.0 * k * K),
            abs(nth_maxwell_time(c1, 1) - 4.0 * K),
            abs(nth_maxwell_time(c2, 2) - 2.0 * k * root_p2(1, float(k))),
        )
        prev1 = prev2 = 0.0
        for m in range(1, 7):
            t1 = nth_maxwell_time(c1, m)
            t2 = nth_maxwell_time(c2, m)
            if t1 <= prev1 or t2 <= prev2:
                worst_max = math.inf
            prev1, prev2 = t1, t2
    rep.checks.append(CheckResult("maxwell-time-formulas", worst_max, 1e-12))

    unbounded = all(
        math.isinf(cut_time_upper_bound(c))
        for c in (
            CaseClass(CaseId.C3, 1.0, 0.4, 1, 1),
            CaseClass(CaseId.C4, 0.0, 0.0, 1, 1),
            CaseClass(CaseId.C5, 1.0, 0.0, 1, 1),
        )
    )
    rep.checks.append(CheckResult("unbounded-cut-strata", 0.0 if unbounded else math.inf, 0.0))
    return rep


def _suite_interleaving() -> SuiteReport:
    rep = SuiteReport("interleaving")
    worst = 0.0
    rng = np.random.default_rng(20260815)
    cases: list[CaseClass] = []
    for _ in range(6):
        k = float(rng.uniform(0.08, 0.92))
        phi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
        cases.append(CaseClass(CaseId.C1, k, phi, 1, 1))
    for _ in range(6):
        k = float(rng.uniform(0.12, 0.9))
        psi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
        cases.append(CaseClass(CaseId.C2, k, psi, 1, 1))
    for case in cases:
        for m in (1, 2, 3):
            t = refine_conjugate_time(case, m)
            lo = nth_maxwell_time(case, m)
            hi = nth_maxwell_time(case, m + 1)
            worst = max(worst, lo - t, t - hi)
    rep.checks.append(CheckResult("maxwell-conjugate-interleaving", worst, 1e-9))
    return rep


_RUNNERS = {
    "elliptic": _suite_elliptic,
    "ode": _suite_ode,
    "jacobian": _suite_jacobian,
    "strata": _suite_strata,
    "interleaving": _suite_interleaving,
}


def run_suite(name: str) -> SuiteReport:
    """Run one named suite; raises KeyError on an unknown name."""
    return _RUNNERS[name]()
