from ._afunc import (
    EULER_GAMMA,
    AEvaluator,
    a_closed,
    a_closed_terms,
    exp_e1,
    exp_e1_scaled,
    legendre_parts,
)
from ._bfunc import b_alternating, b_series, b_value, b_zero
from ._coeffs import (
    CoeffTerm,
    ExpansionIndices,
    TermKey,
    generate_terms,
    iter_expansion,
    normalization_radical,
)
from ._engine import (
    EvalConfig,
    IntegralResult,
    MuPlan,
    evaluate,
    evaluate_batch,
    evaluate_batch_async,
    mu_limits,
)
from ._model import (
    Center,
    IntegralClass,
    IntegralRequest,
    ScaledParams,
    SlaterOrbital,
    make_request,
    scale_parameters,
    selection_check,
    validate_request,
    w_forms,
)
from ._precision import FLOAT, Arithmetic, escalate, lost_digits
from ._towers import a_towers, a_towers_terms, tower_q_coefficients
from ._utils import (
    DomainError,
    IntegralError,
    InvalidQuantumNumbers,
    NonpositiveDistance,
    NonpositiveExponent,
    NotConverged,
    QuadratureNotConverged,
    SeriesNotConverged,
    VerificationFailed,
    ZeroBySelection,
    binom,
    falling,
)

__all__ = [
    "EULER_GAMMA",
    "AEvaluator",
    "a_closed",
    "a_closed_terms",
    "exp_e1",
    "exp_e1_scaled",
    "legendre_parts",
    "b_alternating",
    "b_series",
    "b_value",
    "b_zero",
    "FLOAT",
    "Arithmetic",
    "escalate",
    "lost_digits",
    "a_towers",
    "a_towers_terms",
    "tower_q_coefficients",
    "CoeffTerm",
    "ExpansionIndices",
    "TermKey",
    "generate_terms",
    "iter_expansion",
    "normalization_radical",
    "EvalConfig",
    "IntegralResult",
    "MuPlan",
    "evaluate",
    "evaluate_batch",
    "evaluate_batch_async",
    "mu_limits",
    "Center",
    "IntegralClass",
    "IntegralRequest",
    "ScaledParams",
    "SlaterOrbital",
    "make_request",
    "scale_parameters",
    "selection_check",
    "validate_request",
    "w_forms",
    "DomainError",
    "IntegralError",
    "InvalidQuantumNumbers",
    "NonpositiveDistance",
    "NonpositiveExponent",
    "NotConverged",
    "QuadratureNotConverged",
    "SeriesNotConverged",
    "VerificationFailed",
    "ZeroBySelection",
    "binom",
    "falling",
]
