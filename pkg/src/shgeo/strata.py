"""Root functions, Maxwell strata and the cut time upper bound.

The rectifying coordinates factor along geodesics through four functions
of the half-time p (E below is the second-kind integral in Jacobi form):

    f1(p) = cn*E(p) - sn*dn
    f2(p) = dn*E(p) - k^2*sn*cn
    f3(p) = -dn*E(p) + p*dn*(1-k^2) + k^2*sn*cn
    f4(p) = -cn*E(p) + p*cn*(1-k^2) + sn*dn

f2 > 0 and f3 < 0 for p > 0, so R2 never vanishes on C1 and R1 never
vanishes on C2; Maxwell points come from the zeros of f1 (on C1), f4
(on C2) and of sn (the z = 0 plane, both strata).  f1 and f4 have
exactly one zero in each interval (2nK, (2n+1)K), n >= 1, denoted
p1_n(k) and p2_n(k).  Uniqueness follows from the monotone quotients

    g1 = f1/cn  with  g1' = -(1-k^2)*sn^2/cn^2 <= 0,
    g4 = f4/cn  with  g4' =  (1-k^2)/cn^2      >  0,

which also certify the bisection brackets used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .elliptic import DomainError, complete_K, incomplete_E, jacobi
from .expmap import clock
from .phase import CaseClass, CaseId

__all__ = [
    "RootIndex",
    "TimeBracket",
    "BracketKind",
    "f1",
    "f2",
    "f3",
    "f4",
    "root_p1",
    "root_p2",
    "maxwell_membership",
    "limit_conjugate_flags",
    "first_maxwell_time",
    "nth_maxwell_time",
    "cut_time_upper_bound",
]


class BracketKind(str, Enum):
    MAXWELL = "maxwell"
    CONJUGATE_ODD = "conjugate_odd"
    CONJUGATE_EVEN = "conjugate_even"


@dataclass(frozen=True)
class RootIndex:
    """Which root: n-th zero of f1 or of f4 (n >= 1)."""

    n: int
    which_f: str  # "f1" | "f4"


@dataclass(frozen=True)
class TimeBracket:
    lo: float
    hi: float
    n: int
    kind: BracketKind


def f1(p, k: float):
    sn, cn, dn = jacobi(p, k)
    return cn * incomplete_E(p, k) - sn * dn


def f2(p, k: float):
    sn, cn, dn = jacobi(p, k)
    return dn * incomplete_E(p, k) - k * k * sn * cn


def f3(p, k: float):
    sn, cn, dn = jacobi(p, k)
    return -dn * incomplete_E(p, k) + p * dn * (1.0 - k * k) + k * k * sn * cn


def f4(p, k: float):
    sn, cn, dn = jacobi(p, k)
    return -cn * incomplete_E(p, k) + p * cn * (1.0 - k * k) + sn * dn


def _df1(p, k):
    # f1' = -sn*f2
    sn, _, _ = jacobi(p, k)
    return -sn * f2(p, k)


def _df4(p, k):
    # f4' = -sn*f3 + (1-k^2)*cn
    sn, cn, _ = jacobi(p, k)
    return -sn * f3(p, k) + (1.0 - k * k) * cn


def _bisect_root(fn, dfn, lo: float, hi: float, k: float, width: float) -> float:
    flo = fn(lo, k)
    fhi = fn(hi, k)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise RuntimeError("root bracket lost its sign change; modulus out of range?")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        fm = fn(mid, k)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    p = 0.5 * (lo + hi)
    d = dfn(p, k)
    if d != 0.0:
        q = p - fn(p, k) / d
        if lo <= q <= hi:
            p = q
    return p


@lru_cache(maxsize=None)
def _cached_root(which: str, n: int, k: float) -> float:
    K = complete_K(k)
    lo, hi = 2.0 * n * K, (2.0 * n + 1.0) * K
    width = 1e-12 * K
    if which == "f1":
        return _bisect_root(f1, _df1, lo, hi, k, width)
    return _bisect_root(f4, _df4, lo, hi, k, width)


def _check_root_args(n: int, k: float):
    if n < 1:
        raise DomainError("root index n must be >= 1")
    if not 0.0 < k <= 1.0 - 1e-9:
        raise DomainError(f"roots need a modulus in (0, 1); got k={k!r}")


def root_p1(n: int, k: float) -> float:
    """n-th zero of f1, inside (2nK, (2n+1)K).  Cached per (n, k)."""
    _check_root_args(n, k)
    return _cached_root("f1", n, float(k))


def root_p2(n: int, k: float) -> float:
    """n-th zero of f4, inside (2nK, (2n+1)K).  Cached per (n, k)."""
    _check_root_args(n, k)
    return _cached_root("f4", n, float(k))


@lru_cache(maxsize=None)
def root_p1_zero(n: int) -> float:
    """n-th zero of p*cos(p) - sin(p): the k -> 0 limit of root_p1."""
    if n < 1:
        raise DomainError("root index n must be >= 1")
    lo, hi = n * math.pi, n * math.pi + 0.5 * math.pi

    def fn(p, _k):
        return p * math.cos(p) - math.sin(p)

    def dfn(p, _k):
        return -p * math.sin(p)

    return _bisect_root(fn, dfn, lo, hi, 0.0, 1e-14)


def maxwell_membership(case: CaseClass, t: float, tol: float = 1e-8) -> set[str]:
    """Labels of the Maxwell strata containing the point at time t.

    Membership is tested to within tol in the p variable, and the
    accompanying non-degeneracy conditions (sn tau != 0, cn tau != 0)
    to within the same tol.  Empty away from Maxwell times and on
    C3/C4/C5, which carry no Maxwell points.
    """
    if case.case_id not in (CaseId.C1, CaseId.C2):
        return set()
    clk = clock(case, t)
    p, tau, k = clk.p, clk.tau, case.k
    K = complete_K(k)
    snt, cnt, _ = jacobi(tau, k)
    out: set[str] = set()

    n2 = int(round(p / (2.0 * K)))
    if n2 >= 1 and abs(p - 2.0 * n2 * K) <= tol and abs(snt) > tol:
        out.add("MAX2")

    n = int(math.floor(p / (2.0 * K)))
    if n >= 1:
        if case.case_id is CaseId.C1:
            if abs(p - root_p1(n, k)) <= tol and abs(cnt) > tol:
                out.add("MAX1")
        else:
            if abs(p - root_p2(n, k)) <= tol and abs(cnt) > tol:
                out.add("MAX6")
    return out


def limit_conjugate_flags(case: CaseClass, t: float, tol: float = 1e-8) -> bool:
    """True when (p, tau) sits at a degenerate Maxwell configuration.

    These are the limit points of the Maxwell strata: p at a Maxwell
    value while the matching trig factor of tau vanishes.  They are
    conjugate configurations rather than genuine double points.
    """
    if case.case_id not in (CaseId.C1, CaseId.C2):
        return False
    clk = clock(case, t)
    p, tau, k = clk.p, clk.tau, case.k
    K = complete_K(k)
    snt, cnt, _ = jacobi(tau, k)

    n2 = int(round(p / (2.0 * K)))
    if n2 >= 1 and abs(p - 2.0 * n2 * K) <= tol and abs(snt) <= tol:
        return True

    n = int(math.floor(p / (2.0 * K)))
    if n >= 1 and abs(cnt) <= tol:
        if case.case_id is CaseId.C1 and abs(p - root_p1(n, k)) <= tol:
            return True
        if case.case_id is CaseId.C2 and abs(p - root_p2(n, k)) <= tol:
            return True
    return False


def first_maxwell_time(case: CaseClass) -> float:
    """Infimum of Maxwell times over the stratum: 4K on C1, 4kK on C2,
    +inf on C3/C4/C5."""
    if case.case_id is CaseId.C1:
        return 4.0 * complete_K(case.k)
    if case.case_id is CaseId.C2:
        return 4.0 * case.k * complete_K(case.k)
    return math.inf


def nth_maxwell_time(case: CaseClass, index: int) -> float:
    """Maxwell times in increasing order: index 2n-1 -> 4nK (z = 0 plane),
    index 2n -> twice the n-th root of f1 (C1) or f4 (C2)."""
    if index < 1:
        raise DomainError("maxwell time index must be >= 1")
    if case.case_id not in (CaseId.C1, CaseId.C2):
        raise DomainError(f"{case.case_id.value} has no Maxwell times")
    n = (index + 1) // 2
    k = case.k
    if case.case_id is CaseId.C1:
        if index % 2 == 1:
            return 4.0 * n * complete_K(k)
        return 2.0 * root_p1(n, k)
    if index % 2 == 1:
        return 4.0 * n * k * complete_K(k)
    return 2.0 * k * root_p2(n, k)


def cut_time_upper_bound(case: CaseClass) -> float:
    """Upper bound for the cut time: the first Maxwell time (may be inf)."""
    return first_maxwell_time(case)
