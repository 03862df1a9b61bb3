"""Quasi-uniform (Airy-summed) approximation for radial bound states.

Solves the radial Schroedinger equation with power-law potentials
V(r) = alpha r^k through a turning-point-uniform closed-form approximation
of the Riccati log-derivative, and quantifies its accuracy against
closed-form and Numerov reference solutions.
"""

from .airy import (
    AiryOverflowError,
    AiryPoleError,
    AiryQuad,
    BranchSelector,
    airy_quad,
    airy_zero,
    log_deriv_combo,
)
from .core import (
    BoundaryMatch,
    BoundaryMatchError,
    StationaryPointError,
    abc_coeffs,
    log_derivative,
    log_derivative_prime,
    riccati_residual,
    solve_boundary_match,
    y2_of,
)
from .metrics import (
    MetricsReport,
    compare_to_exact,
    discrepancy,
    energy_expectation,
    level_report,
    reference_for,
    relative_deviation,
)
from .problem import (
    DegenerateWellError,
    EffectiveProfile,
    LevelKey,
    ProblemSetup,
    effective_profile,
    locate_turning_points,
    q_derivs,
    small_r_constant,
)
from .quadrature import (
    IntegralSpec,
    NonFiniteIntegrandError,
    ToleranceNotMetError,
    integrate,
    integrate_pv,
)
from .reference import (
    ExactState,
    GridTooCoarseError,
    NumerovGrid,
    linear_exact_l0,
    numerov_solve,
    oscillator_exact,
)
from .spectral import (
    BracketingError,
    QuantizationResult,
    phase_integral,
    solve_level,
)
from .wavefunction import (
    ApproxState,
    apply_hamiltonian,
    build_state,
    count_nodes,
    eval_psi,
    eval_psi_prime,
    region_of,
)

__version__ = "0.1.0"
