"""Certified chaos detection for two-piece piecewise-linear planar maps.

Builds a forward-invariant polygon from a seed orbit, bounds the symbolic
itineraries of its points by a finite word set, verifies an invariant
expanding cone for the corresponding matrix products, and reports a
certified positive lower bound on the Lyapunov exponent.  Hot loops run in
a compiled extension when available (see :mod:`bcnfchaos.kernels`).
"""

from .certify import (
    ChaosCertificate,
    SearchConfig,
    ValidationReport,
    certify,
    cross_validate,
    lambda_bound,
    word_matrices,
)
from .cones import (
    ConeInterval,
    ExpansionResult,
    SlopeFixedPoints,
    SlopeQuadruple,
    build_cone_interval,
    check_cone_expansion,
    check_cone_invariance,
    slope_fixed_points,
)
from .core import (
    BcnfParams,
    CoordinateChange,
    GeneralPwlMap,
    TangentState,
    WordSet,
    apply,
    apply_inverse,
    gamma,
    gamma_set,
    is_generated_by,
    itineraries,
    lyapunov_estimate,
    normalize_to_bcnf,
    phi,
    tangent_step,
)
from .escape import (
    CORE_E,
    INFINITE,
    PreimageLadder,
    build_ladder,
    chi_L,
    classify_region,
    m_p_explicit,
    p_star_closed_form,
)
from .kernels import BACKEND
from .region import (
    InvariantPolygon,
    TrapPolygon,
    build_polygon,
    check_invariance_conditions,
    compute_p_max,
    contains,
    find_escape_indices,
    shrink_to_trap,
    verify_recurrence_sampled,
)
from .sweep import SweepCell, SweepSpec, run_sweep, write_sweep

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BcnfParams",
    "ChaosCertificate",
    "ConeInterval",
    "CoordinateChange",
    "CORE_E",
    "ExpansionResult",
    "GeneralPwlMap",
    "INFINITE",
    "InvariantPolygon",
    "PreimageLadder",
    "SearchConfig",
    "SlopeFixedPoints",
    "SlopeQuadruple",
    "SweepCell",
    "SweepSpec",
    "TangentState",
    "TrapPolygon",
    "ValidationReport",
    "WordSet",
    "apply",
    "apply_inverse",
    "build_cone_interval",
    "build_ladder",
    "build_polygon",
    "certify",
    "check_cone_expansion",
    "check_cone_invariance",
    "check_invariance_conditions",
    "chi_L",
    "classify_region",
    "compute_p_max",
    "contains",
    "cross_validate",
    "find_escape_indices",
    "gamma",
    "gamma_set",
    "is_generated_by",
    "itineraries",
    "lambda_bound",
    "lyapunov_estimate",
    "m_p_explicit",
    "normalize_to_bcnf",
    "p_star_closed_form",
    "phi",
    "run_sweep",
    "shrink_to_trap",
    "slope_fixed_points",
    "tangent_step",
    "verify_recurrence_sampled",
    "word_matrices",
    "write_sweep",
    "__version__",
]
