"""Exact simulation and limit theory of a two-operator quantum walk.

The walk alternates two unitaries on the integer lattice, each step moving
amplitude at most two sites. Away from the coin angles pi/4 and 3pi/4 its
position distribution develops a gap around the origin that widens linearly
in time; this package simulates the walk exactly, evaluates both long-time
limit densities in closed form, and quantifies the agreement between the
two.

The modules split by role: ``core`` holds parameter and state types,
``engine`` the position-space evolution, ``spectral`` the momentum-space
analysis and an independent evolution oracle, ``limit`` the limit densities
and their integrals, ``analysis`` the simulation-versus-theory comparisons,
and ``cli`` a reproducible command-line front end.
"""

__version__ = "0.1.0"

from .analysis import (
    ComparisonReport,
    DEFAULT_QUADRATURE_NODES,
    build_report,
    central_mass,
    empirical_moment,
    gap_mass,
    kolmogorov_distance,
    limit_moment,
    momentum_moment,
)
from .core import (
    AliasingError,
    CoinSpinor,
    DegenerateMomentumError,
    GAPLESS_ANGLE_TOL,
    InitialCoin,
    NonConvergenceError,
    ProbabilityDistribution,
    UnsupportedParameterError,
    WalkParameters,
    WalkState,
    is_gapless_angle,
    make_initial_coin,
    make_parameters,
    validate_distribution,
    validate_state,
)
from .engine import (
    apply_u1,
    apply_u2,
    distribution,
    evolve,
    initial_state,
    step,
)
from .limit import (
    LimitLaw,
    SupportGeometry,
    approximate_pmf,
    density_envelope,
    discriminant,
    gapless_density,
    gapped_density,
    inner_edge_factor,
    limit_cdf,
    limit_density,
    limit_law,
    outer_edge_factor,
    skew_term,
    support_geometry,
)
from .spectral import (
    EigenSystemAt,
    branch_weights,
    eigensystem,
    fourier_evolve,
    group_velocity,
    hadamard_factorization_residual,
    one_step_operator,
    phase_cosine,
    speed_profile,
    u1_hat,
    u2_hat,
)

__all__ = [
    "__version__",
    # core
    "WalkParameters",
    "InitialCoin",
    "CoinSpinor",
    "WalkState",
    "ProbabilityDistribution",
    "make_parameters",
    "make_initial_coin",
    "is_gapless_angle",
    "validate_state",
    "validate_distribution",
    "GAPLESS_ANGLE_TOL",
    "UnsupportedParameterError",
    "DegenerateMomentumError",
    "AliasingError",
    "NonConvergenceError",
    # engine
    "initial_state",
    "apply_u1",
    "apply_u2",
    "step",
    "evolve",
    "distribution",
    # spectral
    "EigenSystemAt",
    "u1_hat",
    "u2_hat",
    "one_step_operator",
    "phase_cosine",
    "eigensystem",
    "group_velocity",
    "branch_weights",
    "speed_profile",
    "hadamard_factorization_residual",
    "fourier_evolve",
    # limit
    "SupportGeometry",
    "LimitLaw",
    "support_geometry",
    "discriminant",
    "inner_edge_factor",
    "outer_edge_factor",
    "density_envelope",
    "skew_term",
    "gapless_density",
    "gapped_density",
    "limit_density",
    "limit_law",
    "limit_cdf",
    "approximate_pmf",
    # analysis
    "ComparisonReport",
    "DEFAULT_QUADRATURE_NODES",
    "empirical_moment",
    "momentum_moment",
    "limit_moment",
    "kolmogorov_distance",
    "gap_mass",
    "central_mass",
    "build_report",
]
