import math

import numpy as np
import pytest

import oracles
from shgeo.conjugate import (
    NoSignChangeError,
    first_conjugate_bracket,
    j1,
    jacobian,
    nth_conjugate_bracket,
    refine_conjugate_time,
)
from shgeo.elliptic import DomainError, complete_E, complete_K, jacobi
from shgeo.expmap import exp
from shgeo.phase import CaseClass, CaseId
from shgeo.strata import nth_maxwell_time, root_p1


def test_degenerate_p_closed_form():
    # at p = 2nK the numerator collapses to 16 n^2 k E (E - (1-k^2) K) sn^2 tau
    for k in (0.2, 0.5, 0.8):
        K, E = complete_K(k), complete_E(k)
        for n in (1, 2):
            for tau in (0.3, 1.1, 2.9):
                sn, _, _ = jacobi(tau, k)
                want = 16.0 * n * n * k * E * (E - (1.0 - k * k) * K) * sn * sn
                assert j1(2.0 * n * K, tau, k) == pytest.approx(want, abs=1e-9)


def test_small_modulus_limit():
    k = 1e-4
    for p in np.linspace(0.1, 3.0, 30):
        want = 4.0 * math.sin(p) * (math.sin(p) - p * math.cos(p))
        got = j1(float(p), float(p) + 0.7, k) / k
        assert abs(got - want) / max(1.0, abs(want)) <= 1e-3


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(19)
    for cid in (CaseId.C1, CaseId.C2):
        checked = 0
        while checked < 25:
            k = float(rng.uniform(0.15, 0.85))
            phi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
            t = float(rng.uniform(0.5, 6.5))
            case = CaseClass(cid, k, phi, 1, 1)
            ana = jacobian(case, t).j
            if abs(ana) < 1e-3:
                continue
            fd = oracles.fd_determinant(
                exp, lambda p_, k_: CaseClass(cid, k_, p_, 1, 1), phi, k, t
            )
            assert abs(fd - ana) / abs(ana) <= 1e-4
            checked += 1


def test_c2_is_minus_k_times_c1_form():
    for k in (0.3, 0.6, 0.9):
        case = CaseClass(CaseId.C2, k, 1.3, 1, 1)
        for t in (1.0, 4.0):
            val = jacobian(case, t)
            p = 0.5 * t / k
            tau = 1.3 + p
            snp, _, _ = jacobi(p, k)
            snt, _, _ = jacobi(tau, k)
            delta = 1.0 - (k * snp * snt) ** 2
            base = j1(p, tau, k) / ((1.0 - k * k) ** 2 * delta)
            assert val.j == pytest.approx(-k * base, rel=1e-14)


def test_brackets_contain_refined_times():
    rng = np.random.default_rng(29)
    for _ in range(6):
        cid = CaseId.C1 if rng.random() < 0.5 else CaseId.C2
        k = float(rng.uniform(0.15, 0.85))
        phi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
        case = CaseClass(cid, k, phi, 1, 1)
        prev = 0.0
        for m in (1, 2, 3):
            br = nth_conjugate_bracket(case, m)
            t = refine_conjugate_time(case, m)
            assert br.lo - 1e-9 <= t <= br.hi + 1e-9
            assert t > prev
            assert abs(jacobian(case, t).j) <= 1e-6
            prev = t


def test_first_bracket_endpoints():
    case = CaseClass(CaseId.C1, 0.5, 0.3, 1, 1)
    br = first_conjugate_bracket(case)
    K = complete_K(0.5)
    assert br.lo == pytest.approx(4.0 * K)
    assert br.hi == pytest.approx(2.0 * root_p1(1, 0.5))
    c2 = CaseClass(CaseId.C2, 0.5, 0.3, 1, 1)
    br2 = first_conjugate_bracket(c2)
    assert br2.lo == pytest.approx(4.0 * 0.5 * K)
    assert br2.hi == pytest.approx(2.0 * 0.5 * root_p1(1, 0.5))


def test_endpoint_degeneracies_are_exact():
    # sn(tau) = 0 at the lower end pins the time there; cn(tau) = 0 at the top
    k = 0.5
    K = complete_K(k)
    low = CaseClass(CaseId.C1, k, 0.0, 1, 1)
    assert refine_conjugate_time(low, 1) == 4.0 * K
    p11 = root_p1(1, k)
    high = CaseClass(CaseId.C1, k, (K - p11) % (4.0 * K), 1, 1)
    assert refine_conjugate_time(high, 1) == 2.0 * p11


def test_interleaving_with_maxwell_times():
    rng = np.random.default_rng(37)
    for _ in range(5):
        cid = CaseId.C1 if rng.random() < 0.5 else CaseId.C2
        k = float(rng.uniform(0.2, 0.8))
        phi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
        case = CaseClass(cid, k, phi, 1, 1)
        for m in (1, 2, 3):
            t = refine_conjugate_time(case, m)
            assert nth_maxwell_time(case, m) - 1e-12 <= t
            assert t <= nth_maxwell_time(case, m + 1) + 1e-12


def test_rest_and_separatrix_strata():
    c4 = CaseClass(CaseId.C4, 0.0, 0.0, 1, 1)
    assert refine_conjugate_time(c4, 1) == 2.0 * math.pi
    assert refine_conjugate_time(c4, 3) == 4.0 * math.pi
    assert refine_conjugate_time(c4, 2) == pytest.approx(2.0 * oracles.tan_root(1), abs=1e-10)
    assert math.isinf(refine_conjugate_time(CaseClass(CaseId.C3, 1.0, 0.4, 1, 1), 1))
    assert math.isinf(refine_conjugate_time(CaseClass(CaseId.C5, 1.0, 0.0, 1, 1), 1))


def test_jacobian_domain_errors():
    with pytest.raises(DomainError):
        jacobian(CaseClass(CaseId.C3, 1.0, 0.4, 1, 1), 1.0)
    with pytest.raises(DomainError):
        jacobian(CaseClass(CaseId.C1, 0.5, 0.3, 1, 1), 0.0)
    with pytest.raises(DomainError):
        nth_conjugate_bracket(CaseClass(CaseId.C5, 1.0, 0.0, 1, 1), 1)
    with pytest.raises(DomainError):
        refine_conjugate_time(CaseClass(CaseId.C4, 0.0, 0.0, 1, 1), 0)
