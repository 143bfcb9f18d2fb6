"""Jacobi elliptic functions and elliptic integrals via the arithmetic-geometric mean.

Self-contained kernel: complete integrals come from the AGM fixed point,
sn/cn/dn/am from the descending Landen (backward phase) recurrence, and the
incomplete integrals from the matching ascending recurrence.  Everything is
vectorised over the argument; the modulus is a scalar per call.

Conventions
-----------
* The modulus is ``k`` itself, never the parameter ``m = k**2``.
* ``u`` denotes a Jacobi argument (the thing sn/cn/dn eat).
* ``phi`` denotes a Legendre amplitude (an angle).
* ``incomplete_F(phi, k)`` is the Legendre integral of the first kind, so
  ``incomplete_F(am(u, k), k) == u``.
* ``incomplete_E(u, k)`` is the Jacobi-form integral of the second kind,
  the antiderivative of ``dn(u, k)**2`` vanishing at 0.

Moduli are accepted in ``[0, 1 - 1e-9]``; the hyperbolic limit k = 1 is
handled by the callers that need it, not here.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "MODULUS_CAP",
    "DomainError",
    "JacobiTriple",
    "complete_K",
    "complete_E",
    "jacobi",
    "am",
    "incomplete_F",
    "incomplete_E",
]

MODULUS_CAP = 1.0 - 1e-9

# AGM iterates gain digits quadratically; 1e-15 on c_n leaves the tail
# below one ulp of the double result.
_AGM_TOL = 1e-15
_AGM_MAX_ITER = 40


class DomainError(ValueError):
    """A parameter lies outside the supported domain."""


class JacobiTriple(NamedTuple):
    sn: float | np.ndarray
    cn: float | np.ndarray
    dn: float | np.ndarray


def _check_modulus(k: float) -> float:
    k = float(k)
    if not 0.0 <= k <= MODULUS_CAP:
        raise DomainError(
            f"modulus k={k!r} outside [0, {MODULUS_CAP}]; "
            "the k -> 1 separatrix limit must be handled by the caller"
        )
    return k


def _agm_chain(k: float) -> tuple[list[float], list[float], list[float]]:
    """AGM scheme (a_n, b_n, c_n) from (1, k', k) down to c_N < tol."""
    a = [1.0]
    b = [math.sqrt((1.0 - k) * (1.0 + k))]
    c = [k]
    while c[-1] > _AGM_TOL and len(a) < _AGM_MAX_ITER:
        an, bn = a[-1], b[-1]
        c.append(0.5 * (an - bn))
        a.append(0.5 * (an + bn))
        b.append(math.sqrt(an * bn))
    return a, b, c


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind."""
    k = _check_modulus(k)
    a, _, _ = _agm_chain(k)
    return math.pi / (2.0 * a[-1])


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind."""
    k = _check_modulus(k)
    a, _, c = _agm_chain(k)
    s = sum(2.0 ** (n - 1) * cn * cn for n, cn in enumerate(c))
    return math.pi / (2.0 * a[-1]) * (1.0 - s)


def _reduce(u: np.ndarray, K: float) -> tuple[np.ndarray, np.ndarray]:
    """Split u = u_r + 2*K*m with u_r in [-K, K]."""
    m = np.round(u / (2.0 * K))
    return u - 2.0 * K * m, m


def _phi_chain(u_r: np.ndarray, a: list[float], c: list[float]) -> list[np.ndarray]:
    """Backward phase recurrence; returns [phi_0 .. phi_N], phi_0 = am(u_r)."""
    N = len(a) - 1
    phi = [None] * (N + 1)
    phi[N] = (2.0**N) * a[N] * u_r
    for n in range(N, 0, -1):
        s = np.clip(c[n] / a[n] * np.sin(phi[n]), -1.0, 1.0)
        phi[n - 1] = 0.5 * (phi[n] + np.arcsin(s))
    return phi


def jacobi(u, k: float) -> JacobiTriple:
    """sn, cn, dn at Jacobi argument u (scalar or array)."""
    k = _check_modulus(k)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    a, _, c = _agm_chain(k)
    K = math.pi / (2.0 * a[-1])
    u_r, m = _reduce(u, K)
    phi0 = _phi_chain(u_r, a, c)[0]
    sign = np.where(m.astype(np.int64) % 2 == 0, 1.0, -1.0)
    sn = sign * np.sin(phi0)
    cn = sign * np.cos(phi0)
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    if scalar:
        return JacobiTriple(float(sn), float(cn), float(dn))
    return JacobiTriple(sn, cn, dn)


def am(u, k: float):
    """Jacobi amplitude, the increasing inverse of incomplete_F in u."""
    k = _check_modulus(k)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    a, _, c = _agm_chain(k)
    K = math.pi / (2.0 * a[-1])
    u_r, m = _reduce(u, K)
    out = _phi_chain(u_r, a, c)[0] + m * math.pi
    return float(out) if scalar else out


def incomplete_E(u, k: float):
    """Second-kind integral in Jacobi form: int_0^u dn(t, k)^2 dt.

    Quasi-periodic, incomplete_E(u + 2K) = incomplete_E(u) + 2E, so large
    arguments are reduced first and the complete part added back exactly.
    """
    k = _check_modulus(k)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    a, _, c = _agm_chain(k)
    K = math.pi / (2.0 * a[-1])
    E = K * (1.0 - sum(2.0 ** (n - 1) * cn * cn for n, cn in enumerate(c)))
    u_r, m = _reduce(u, K)
    phi = _phi_chain(u_r, a, c)
    out = (E / K) * u_r + 2.0 * m * E
    for n in range(1, len(phi)):
        out = out + c[n] * np.sin(phi[n])
    return float(out) if scalar else out


def incomplete_F(phi, k: float):
    """First-kind Legendre integral of the amplitude angle phi.

    Inverse of ``am``: incomplete_F(am(u, k), k) == u for all real u.
    """
    k = _check_modulus(k)
    scalar = np.ndim(phi) == 0
    phi = np.asarray(phi, dtype=float)
    a, b, c = _agm_chain(k)
    N = len(a) - 1
    K = math.pi / (2.0 * a[-1])
    m = np.round(phi / math.pi)
    ph = phi - m * math.pi
    for n in range(N):
        d = np.arctan2(b[n] * np.sin(ph), a[n] * np.cos(ph))
        ph = ph + d + math.pi * np.round((ph - d) / math.pi)
    out = ph / (2.0**N * a[-1]) + m * 2.0 * K
    return float(out) if scalar else out
