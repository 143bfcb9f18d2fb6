"""Closed-form geodesics for the sub-Riemannian structure on SH(2).

The group SH(2) of hyperbolic motions of the plane is coordinatised by
(x, y, z); length minimisers of the rank-2 distribution are parametrised
by a pendulum on a doubled phase cylinder.  This package classifies
initial covectors, evaluates the exponential map in closed form through
Jacobi elliptic functions, locates Maxwell and conjugate times, and
samples wavefronts and spheres as exportable point clouds.
"""

from .elliptic import (
    MODULUS_CAP,
    DomainError,
    JacobiTriple,
    am,
    complete_E,
    complete_K,
    incomplete_E,
    incomplete_F,
    jacobi,
)
from .phase import (
    CaseClass,
    CaseId,
    PhasePoint,
    classify,
    elliptic_coordinates,
    energy,
    pendulum_state,
    phase_point,
)
from .expmap import ExtremalClock, GroupElement, clock, exp, rectify, trajectory_identities
from .strata import (
    BracketKind,
    RootIndex,
    TimeBracket,
    cut_time_upper_bound,
    f1,
    f2,
    f3,
    f4,
    first_maxwell_time,
    limit_conjugate_flags,
    maxwell_membership,
    nth_maxwell_time,
    root_p1,
    root_p1_zero,
    root_p2,
)
from .conjugate import (
    JacobianValue,
    NoSignChangeError,
    first_conjugate_bracket,
    j1,
    jacobian,
    nth_conjugate_bracket,
    refine_conjugate_time,
)
from .cloud import (
    FrontCloud,
    FrontPoint,
    GridSpec,
    IntersectionReport,
    export,
    self_intersections,
    sphere,
    wavefront,
)
from .verify import SUITES, CheckResult, SuiteReport, run_suite

__version__ = "0.1.0"
