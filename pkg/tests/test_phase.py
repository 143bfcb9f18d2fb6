import math

import numpy as np
import pytest

from shgeo.elliptic import DomainError, complete_K
from shgeo.phase import (
    CaseClass,
    CaseId,
    PhasePoint,
    classify,
    elliptic_coordinates,
    energy,
    pendulum_state,
    phase_point,
)


def test_energy_and_normalization():
    lam = PhasePoint(-1.0, 2.0)
    assert 0.0 <= lam.gamma < 4.0 * math.pi
    assert energy(lam) == pytest.approx(2.0 - math.cos(-1.0), abs=1e-15)


@pytest.mark.parametrize(
    "gamma,c,want",
    [
        (0.0, 0.0, CaseId.C4),
        (2.0 * math.pi, 0.0, CaseId.C4),
        (0.0, 1.0, CaseId.C1),
        (1.2, 0.3, CaseId.C1),
        (0.0, 3.0, CaseId.C2),
        (2.5, 2.4, CaseId.C2),
        (math.pi, 0.0, CaseId.C5),
        (3.0 * math.pi, 0.0, CaseId.C5),
        (math.pi / 2.0, math.sqrt(2.0), CaseId.C3),
        (math.pi / 2.0, -math.sqrt(2.0), CaseId.C3),
    ],
)
def test_classification_examples(gamma, c, want):
    assert classify(PhasePoint(gamma, c)).case_id is want


def test_rest_points_have_signs():
    stable = classify(PhasePoint(2.0 * math.pi, 0.0))
    assert stable.case_id is CaseId.C4 and stable.s1 == -1
    unstable = classify(PhasePoint(3.0 * math.pi, 0.0))
    assert unstable.case_id is CaseId.C5 and unstable.s2 == -1


def test_classify_round_trip_c1_c2():
    rng = np.random.default_rng(42)
    for _ in range(200):
        cid = CaseId.C1 if rng.random() < 0.5 else CaseId.C2
        k = float(rng.uniform(0.05, 0.95))
        phi = float(rng.uniform(0.0, 4.0 * complete_K(k)))
        s = 1 if rng.random() < 0.5 else -1
        case = (
            CaseClass(CaseId.C1, k, phi, s, 1)
            if cid is CaseId.C1
            else CaseClass(CaseId.C2, k, phi, 1, s)
        )
        back = classify(phase_point(case))
        assert back.case_id is cid
        assert back.k == pytest.approx(k, abs=1e-11)
        assert back.phi == pytest.approx(phi, abs=1e-9 * (1.0 + phi))
        assert (back.s1, back.s2) == (case.s1, case.s2)


def test_classify_round_trip_c3():
    for phi in np.linspace(-2.5, 2.5, 11):
        for s1 in (1, -1):
            for s2 in (1, -1):
                case = CaseClass(CaseId.C3, 1.0, float(phi), s1, s2)
                back = classify(phase_point(case))
                assert back.case_id is CaseId.C3
                assert back.phi == pytest.approx(float(phi), abs=1e-9)
                assert (back.s1, back.s2) == (s1, s2)


def test_pendulum_state_solves_the_pendulum():
    # central differences on the flow must reproduce gamma' = c, c' = -sin gamma
    cases = [
        CaseClass(CaseId.C1, 0.6, 0.8, 1, 1),
        CaseClass(CaseId.C1, 0.3, 3.9, -1, 1),
        CaseClass(CaseId.C2, 0.7, 1.2, 1, -1),
        CaseClass(CaseId.C3, 1.0, -0.4, -1, 1),
    ]
    h = 1e-5
    for case in cases:
        for t in (0.3, 1.9, 4.7):
            gm, _ = pendulum_state(case, t - h)
            gp, _ = pendulum_state(case, t + h)
            g0, c0 = pendulum_state(case, t)
            dg = (gp - gm) % (4.0 * math.pi)
            if dg > 2.0 * math.pi:
                dg -= 4.0 * math.pi
            assert dg / (2.0 * h) == pytest.approx(c0, abs=1e-6)
            cm = pendulum_state(case, t - h)[1]
            cp = pendulum_state(case, t + h)[1]
            assert (cp - cm) / (2.0 * h) == pytest.approx(-math.sin(g0), abs=1e-6)


def test_energy_is_conserved_along_the_flow():
    case = CaseClass(CaseId.C2, 0.45, 2.2, 1, 1)
    e0 = energy(phase_point(case))
    for t in np.linspace(0.0, 12.0, 25):
        g, c = pendulum_state(case, float(t))
        assert 0.5 * c * c - math.cos(g) == pytest.approx(e0, abs=1e-10)


def test_rest_strata_are_fixed_points():
    for case in (CaseClass(CaseId.C4, 0.0, 0.0, 1, 1), CaseClass(CaseId.C5, 1.0, 0.0, 1, -1)):
        g0, c0 = pendulum_state(case, 0.0)
        g1, c1 = pendulum_state(case, 5.3)
        assert (g0, c0) == (g1, c1)
        assert c0 == 0.0


def test_classification_tolerance_band():
    # within tol of the separatrix energy the point is treated as critical
    near = PhasePoint(0.0, 2.0 + 1e-12)
    assert classify(near, tol=1e-10).case_id is CaseId.C3
    # tightening tol below the kernel's modulus resolution is refused loudly
    with pytest.raises(DomainError):
        classify(near, tol=1e-14)
    # a bit farther out the same tol yields a genuine rotating covector
    off = PhasePoint(0.0, 2.0 + 1e-6)
    assert classify(off, tol=1e-10).case_id is CaseId.C2


def test_elliptic_coordinates_reject_rest_points():
    with pytest.raises(DomainError):
        elliptic_coordinates(PhasePoint(0.0, 0.0))
    with pytest.raises(DomainError):
        elliptic_coordinates(PhasePoint(math.pi, 0.0))


def test_separatrix_saturation_branch():
    # |sin(gamma/2)| ~ 1 forces the acosh fallback; the round trip must hold
    case = CaseClass(CaseId.C3, 1.0, 12.0, 1, 1)
    lam = phase_point(case)
    back = classify(lam)
    assert back.case_id is CaseId.C3
    assert back.phi == pytest.approx(12.0, rel=1e-9)
