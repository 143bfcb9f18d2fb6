"""Jacobian of the exponential map and conjugate time localisation.

On C1 the Jacobian of (phi, k, t) -> (x, y, z), cleared of its positive
prefactor, is

    j1(p, tau, k) = -4k * (a1 + a2 + a3)
    a1 = sn p * cn p * dn p * (2E(p) - p + k^2 p)
    a2 = -dn^2 p * sn^2 p - k^2 * sn^2 p * cn^2 tau
    a3 = E(p) * (sn^2 p - sn^2 tau) * (E(p) - p + k^2 p)

with the full value j = j1 / ((1-k^2)^2 * delta), delta = 1 - k^2 sn^2 p
sn^2 tau; on C2 the same expression scaled by -k.  The delta denominator
is forced by finite-difference cross-checks of the determinant (relative
agreement ~1e-10); it is positive, so the zero set of j is that of j1.
Conjugate times are the zeros of j along a geodesic.  The m-th zero is
bracketed by Maxwell-type times,

    m = 2n-1:  [4nK,          2*p1_n(k)]      (times k on C2)
    m = 2n:    [2*p1_n(k),    4(n+1)K]        (times k on C2)

and located by bisection, except when j vanishes at a bracket endpoint
(sn tau = 0 pins the odd conjugate time to the lower end, cn tau = 0 to
the upper end); then that endpoint is exact and is returned as is.
C4 is the k -> 0 limit: conjugate times are exactly 2n*pi and twice the
zeros of p*cos p - sin p.  C3 and C5 have no conjugate points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import DomainError, complete_K, incomplete_E, jacobi
from .expmap import clock
from .phase import CaseClass, CaseId
from .strata import BracketKind, TimeBracket, root_p1, root_p1_zero

__all__ = [
    "JacobianValue",
    "NoSignChangeError",
    "j1",
    "jacobian",
    "first_conjugate_bracket",
    "nth_conjugate_bracket",
    "refine_conjugate_time",
]

_PROBES = 32
_ENDPOINT_EPS = 1e-12
_ZERO_TOL = 1e-10


class NoSignChangeError(RuntimeError):
    """The Jacobian did not change sign over a certified bracket."""


@dataclass(frozen=True)
class JacobianValue:
    j1: float
    j: float


def j1(p, tau, k: float):
    """Cleared Jacobian numerator; vectorised in p and tau."""
    kk = k * k
    sn, cn, dn = jacobi(p, k)
    snt, cnt, _ = jacobi(tau, k)
    E = incomplete_E(p, k)
    a1 = sn * cn * dn * (2.0 * E - p + kk * p)
    a2 = -(dn * sn) ** 2 - kk * (sn * cnt) ** 2
    a3 = E * (sn * sn - snt * snt) * (E - p + kk * p)
    return -4.0 * k * (a1 + a2 + a3)


def jacobian(case: CaseClass, t: float) -> JacobianValue:
    """Jacobian of the exponential map at (case, t); C1 and C2 only."""
    if case.case_id not in (CaseId.C1, CaseId.C2):
        raise DomainError(f"jacobian is defined on C1 and C2 only, got {case.case_id.value}")
    if t <= 0.0:
        raise DomainError("jacobian requires t > 0")
    clk = clock(case, t)
    k = case.k
    val = j1(clk.p, clk.tau, k)
    snp, _, _ = jacobi(clk.p, k)
    snt, _, _ = jacobi(clk.tau, k)
    delta = 1.0 - (k * snp * snt) ** 2
    j = val / ((1.0 - k * k) ** 2 * delta)
    if case.case_id is CaseId.C2:
        j = -k * j
    return JacobianValue(j1=float(val), j=float(j))


def _scaled(case: CaseClass) -> float:
    # C2 times are C1 times scaled by k
    return case.k if case.case_id is CaseId.C2 else 1.0


def first_conjugate_bracket(case: CaseClass) -> TimeBracket:
    """[4K, 2*p1_1] on C1 (times k on C2): bounds for the first conjugate time."""
    if case.case_id not in (CaseId.C1, CaseId.C2):
        raise DomainError("first conjugate bracket needs C1 or C2")
    s = _scaled(case)
    K = complete_K(case.k)
    return TimeBracket(4.0 * s * K, 2.0 * s * root_p1(1, case.k), 1, BracketKind.CONJUGATE_ODD)


def nth_conjugate_bracket(case: CaseClass, m: int) -> TimeBracket:
    """Certified bracket for the m-th conjugate time (C1, C2, C4)."""
    if m < 1:
        raise DomainError("conjugate index m must be >= 1")
    cid = case.case_id
    if cid in (CaseId.C3, CaseId.C5):
        raise DomainError(f"{cid.value} carries no conjugate points")
    n = (m + 1) // 2
    if cid is CaseId.C4:
        r = 2.0 * root_p1_zero(n)
        if m % 2 == 1:
            return TimeBracket(2.0 * n * math.pi, r, n, BracketKind.CONJUGATE_ODD)
        return TimeBracket(r, 2.0 * (n + 1) * math.pi, n, BracketKind.CONJUGATE_EVEN)
    s = _scaled(case)
    K = complete_K(case.k)
    r = 2.0 * s * root_p1(n, case.k)
    if m % 2 == 1:
        return TimeBracket(4.0 * n * s * K, r, n, BracketKind.CONJUGATE_ODD)
    return TimeBracket(r, 4.0 * (n + 1) * s * K, n, BracketKind.CONJUGATE_EVEN)


def refine_conjugate_time(case: CaseClass, m: int = 1) -> float:
    """The m-th conjugate time along the geodesic of ``case``.

    Returns +inf on C3 and C5.  On C4 the times are exact.  On C1/C2
    the bracket endpoints are checked for degeneracy first; otherwise
    the sign change of j is bisected to machine width.
    """
    cid = case.case_id
    if cid in (CaseId.C3, CaseId.C5):
        return math.inf
    if cid is CaseId.C4:
        n = (m + 1) // 2
        if m < 1:
            raise DomainError("conjugate index m must be >= 1")
        return 2.0 * n * math.pi if m % 2 == 1 else 2.0 * root_p1_zero(n)

    br = nth_conjugate_bracket(case, m)
    lo, hi = br.lo, br.hi

    def g(t: float) -> float:
        return jacobian(case, t).j

    ts = np.linspace(lo, hi, _PROBES)
    vals = np.array([g(t) for t in ts])
    scale = float(np.max(np.abs(vals)))
    end_eps = max(_ENDPOINT_EPS, _ENDPOINT_EPS * scale)

    glo, ghi = vals[0], vals[-1]
    if abs(glo) <= end_eps:
        return lo
    if abs(ghi) <= end_eps:
        return hi

    a, fa = lo, glo
    b, fb = hi, ghi
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        # endpoints agree in sign: hunt for the interior crossing
        sw = next(
            (i for i in range(1, len(ts)) if math.copysign(1.0, vals[i]) != math.copysign(1.0, fa)),
            None,
        )
        if sw is None:
            raise NoSignChangeError(
                f"no sign change of the Jacobian in [{lo!r}, {hi!r}] for m={m}"
            )
        a, fa = ts[sw - 1], vals[sw - 1]
        b, fb = ts[sw], vals[sw]

    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        fm = g(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    t_star = 0.5 * (a + b)
    if abs(g(t_star)) > _ZERO_TOL * max(scale, 1e-300):
        raise NoSignChangeError(f"bisection stalled at t={t_star!r} with |j| above tolerance")
    return t_star
