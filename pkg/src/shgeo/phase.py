"""Classification of initial covectors on the pendulum phase cylinder.

The vertical subsystem of the normal extremal flow is the standard pendulum

    gamma' = c,    c' = -sin(gamma),

living on the doubled cylinder gamma in R mod 4*pi.  Covectors are split by
the energy E = c^2/2 - cos(gamma) into five strata:

    C1  oscillating pendulum,      -1 < E < 1
    C2  rotating pendulum,          E > 1
    C3  separatrix,                 E = 1, c != 0
    C4  stable rest points,         E = -1           (gamma = 2*pi*n, c = 0)
    C5  unstable rest points,       E = 1, c = 0     (gamma = pi + 2*pi*n)

On C1-C3 the flow is rectified by elliptic coordinates (k, phi).  The
convention, fixed once here and relied on everywhere else:

    C1:  k = sqrt((E+1)/2),  s1 = sgn cos(gamma/2),
         sin(gamma/2) = s1*k*sn(phi,k),  cos(gamma/2) = s1*dn(phi,k),
         c/2 = k*cn(phi,k),  and the flow is phi_t = phi + t.

    C2:  k = sqrt(2/(E+1)),  s2 = sgn c,
         sin(gamma/2) = s2*sn(psi,k),  cos(gamma/2) = cn(psi,k),
         c/2 = s2*dn(psi,k)/k,  and the flow is psi_t = psi + t/k.

    C3:  s1 = sgn cos(gamma/2),  s2 = sgn c,
         sin(gamma/2) = s1*s2*tanh(phi),  cos(gamma/2) = s1*sech(phi),
         c/2 = s2*sech(phi),  and the flow is phi_t = phi + t.

Each line is an identity of the pendulum flow (checked by the ode verify
suite), not just a pointwise change of variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .elliptic import MODULUS_CAP, DomainError, incomplete_F, jacobi

__all__ = [
    "CaseId",
    "PhasePoint",
    "CaseClass",
    "energy",
    "classify",
    "elliptic_coordinates",
    "phase_point",
    "pendulum_state",
]

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


class CaseId(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"


@dataclass
class PhasePoint:
    """Pendulum state (gamma, c); gamma is normalised into [0, 4*pi)."""

    gamma: float
    c: float

    def __post_init__(self):
        g = math.fmod(float(self.gamma), _FOUR_PI)
        if g < 0.0:
            g += _FOUR_PI
        self.gamma = g
        self.c = float(self.c)


@dataclass(frozen=True)
class CaseClass:
    """Classified covector: stratum plus elliptic coordinates.

    k is the elliptic modulus for C1/C2, the sentinel 1.0 on the
    separatrix strata C3/C5 and 0.0 on C4.  phi is the rectified
    coordinate (psi for C2), zero where meaningless (C4, C5).  s1, s2
    are the sign labels of the convention; the ones a stratum does not
    use are stored as +1.
    """

    case_id: CaseId
    k: float
    phi: float
    s1: int
    s2: int


def energy(lam: PhasePoint) -> float:
    """Pendulum energy E = c^2/2 - cos(gamma)."""
    return 0.5 * lam.c * lam.c - math.cos(lam.gamma)


def _sign(x: float) -> int:
    return 1 if x >= 0.0 else -1


def _arg_from_sn_cn(sn: float, cn: float, k: float, tol: float) -> float:
    """Jacobi argument in [0, 4K) with the given sn, cn signature."""
    if k > MODULUS_CAP:
        raise DomainError(
            "covector is closer to the separatrix than the elliptic kernel "
            f"resolves (k={k!r} > {MODULUS_CAP}); classify with tol wide "
            f"enough to absorb it (got tol={tol!r})"
        )
    theta = math.atan2(sn, cn)
    if theta < 0.0:
        theta += _TWO_PI
    return incomplete_F(theta, k)


def classify(lam: PhasePoint, tol: float = 1e-10) -> CaseClass:
    """Assign the stratum and fill the elliptic coordinates.

    tol is the half-width of the acceptance band around the critical
    energies E = +/-1; exact rest points are recognised inside it.
    """
    E = energy(lam)
    g = lam.gamma
    c = lam.c
    half = 0.5 * g

    if abs(E - 1.0) <= tol:
        if abs(c) <= tol:
            return CaseClass(CaseId.C5, 1.0, 0.0, 1, _sign(math.sin(half)))
        s1 = _sign(math.cos(half))
        s2 = _sign(c)
        t = s1 * s2 * math.sin(half)
        if abs(t) < 0.9:
            phi = math.atanh(t)
        else:
            # tanh saturates in doubles; recover |phi| from c = 2*s2*sech(phi)
            phi = math.copysign(math.acosh(2.0 / abs(c)), t)
        return CaseClass(CaseId.C3, 1.0, phi, s1, s2)

    if E <= -1.0 + tol:
        return CaseClass(CaseId.C4, 0.0, 0.0, _sign(math.cos(half)), 1)

    if E < 1.0:
        k = math.sqrt(0.5 * (E + 1.0))
        s1 = _sign(math.cos(half))
        phi = _arg_from_sn_cn(s1 * math.sin(half), 0.5 * c, k, tol)
        return CaseClass(CaseId.C1, k, phi, s1, 1)

    k = math.sqrt(2.0 / (E + 1.0))
    s2 = _sign(c)
    psi = _arg_from_sn_cn(s2 * math.sin(half), math.cos(half), k, tol)
    return CaseClass(CaseId.C2, k, psi, 1, s2)


def elliptic_coordinates(lam: PhasePoint, tol: float = 1e-10) -> CaseClass:
    """classify restricted to the strata that carry elliptic coordinates."""
    case = classify(lam, tol)
    if case.case_id in (CaseId.C4, CaseId.C5):
        raise DomainError(f"elliptic coordinates are undefined on {case.case_id.value}")
    return case


def pendulum_state(case: CaseClass, t: float) -> tuple[float, float]:
    """(gamma_t, c_t) of the pendulum flow started at the classified point."""
    cid = case.case_id
    if cid is CaseId.C1:
        k, s1 = case.k, case.s1
        sn, cn, dn = jacobi(case.phi + t, k)
        g = 2.0 * math.atan2(s1 * k * sn, s1 * dn)
        return g % _FOUR_PI, 2.0 * k * cn
    if cid is CaseId.C2:
        k, s2 = case.k, case.s2
        sn, cn, dn = jacobi(case.phi + t / k, k)
        g = 2.0 * math.atan2(s2 * sn, cn)
        return g % _FOUR_PI, 2.0 * s2 * dn / k
    if cid is CaseId.C3:
        s1, s2 = case.s1, case.s2
        ph = case.phi + t
        sech = 1.0 / math.cosh(ph)
        g = 2.0 * math.atan2(s1 * s2 * math.tanh(ph), s1 * sech)
        return g % _FOUR_PI, 2.0 * s2 * sech
    if cid is CaseId.C4:
        return (0.0 if case.s1 > 0 else _TWO_PI), 0.0
    return (math.pi if case.s2 > 0 else 3.0 * math.pi), 0.0


def phase_point(case: CaseClass) -> PhasePoint:
    """Reconstruct the covector (gamma, c) from its coordinates at t = 0."""
    g, c = pendulum_state(case, 0.0)
    return PhasePoint(g, c)
