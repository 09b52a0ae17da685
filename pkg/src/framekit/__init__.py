"""Exact mask algebra for dual wavelet frames built by the mixed extension principle."""

from .algebra import (
    COS2,
    ECOS,
    ESIN,
    MISC,
    ONE,
    SIN2,
    SINCOS,
    ZERO,
    BothZero,
    GaussianRational,
    LaurentPoly,
    NotDivisible,
    ParseError,
    format_gaussian,
    lp_add,
    lp_conj,
    lp_divide_exact,
    lp_eval_exact,
    lp_eval_float,
    lp_gcd,
    lp_half_shift,
    lp_mul,
    parse_gaussian,
    unit_quotient,
)
from .extension import (
    DEMO_NAMES,
    HALF_DIFF,
    ConditionIIFails,
    ExtensionOutcome,
    InternalError,
    MaskSystem,
    NecessaryConditionsFail,
    Verdict,
    VerifyReport,
    b2_system,
    b2_three_term_criterion,
    condition_II_holds,
    demo_registry,
    extend_one_pair,
    extend_two_pairs,
    mep_verify,
    run_demo,
)
from .masks import (
    Mask,
    NecessaryReport,
    TimeCoeffs,
    bspline_mask,
    check_setup,
    compute_m_alpha_beta,
    extract_lambdas,
    factor_cos,
    factor_sin,
    is_bessel_mask,
    mask_from_time_coeffs,
    necessary_conditions,
    time_coeffs_from_mask,
)
from .render import (
    FrameSpec,
    NonConvergence,
    SampledFunction,
    bspline_exact,
    cascade,
    frame_reconstruct,
    mep_residual_float,
    reconstruction_experiment,
    refine,
    wavelet_from_mask,
)

__version__ = "0.1.0"

__all__ = [
    "COS2",
    "ECOS",
    "ESIN",
    "MISC",
    "ONE",
    "SIN2",
    "SINCOS",
    "ZERO",
    "BothZero",
    "GaussianRational",
    "LaurentPoly",
    "NotDivisible",
    "ParseError",
    "format_gaussian",
    "lp_add",
    "lp_conj",
    "lp_divide_exact",
    "lp_eval_exact",
    "lp_eval_float",
    "lp_gcd",
    "lp_half_shift",
    "lp_mul",
    "parse_gaussian",
    "unit_quotient",
    "DEMO_NAMES",
    "HALF_DIFF",
    "ConditionIIFails",
    "ExtensionOutcome",
    "InternalError",
    "MaskSystem",
    "NecessaryConditionsFail",
    "Verdict",
    "VerifyReport",
    "b2_system",
    "b2_three_term_criterion",
    "condition_II_holds",
    "demo_registry",
    "extend_one_pair",
    "extend_two_pairs",
    "mep_verify",
    "run_demo",
    "Mask",
    "NecessaryReport",
    "TimeCoeffs",
    "bspline_mask",
    "check_setup",
    "compute_m_alpha_beta",
    "extract_lambdas",
    "factor_cos",
    "factor_sin",
    "is_bessel_mask",
    "mask_from_time_coeffs",
    "necessary_conditions",
    "time_coeffs_from_mask",
    "FrameSpec",
    "NonConvergence",
    "SampledFunction",
    "bspline_exact",
    "cascade",
    "frame_reconstruct",
    "mep_residual_float",
    "reconstruction_experiment",
    "refine",
    "wavelet_from_mask",
]
