"""Wavelet regression on warped random designs under long-range dependence."""

from .design import (
    EmpiricalCdf,
    RegressionSample,
    empirical_cdf,
    empirical_coefficients,
    fitted_on_design_grid,
    order_pairs,
)
from .errors import ConfigError, DataError, DomainError, ShapeError, WarpwaveError
from .estimators import (
    EstimatorConfig,
    FitResult,
    SigmaProfile,
    ThresholdPlan,
    apply_threshold,
    compute_thresholds,
    estimate_function,
    estimate_shape,
    estimate_sigma_profile,
    lrd_level_weights,
)
from .harness import (
    McConfig,
    McReport,
    McRow,
    SlopeReport,
    eval_target,
    rate_slope_experiment,
    run_mc,
    run_replication,
    scenario_sigma,
    snr_standardize,
)
from .noise import (
    LrdProcessSpec,
    estimate_alpha,
    farima_coefficients,
    generate_lrd,
    marginal_variance,
    variance_scaling_probe,
)
from .rates import (
    BesovIndices,
    EmbeddingReport,
    PhaseDiagnosis,
    besov_seminorm,
    classify_phase,
    embedding_check,
    rate_exponents,
    theoretical_risk,
    weak_lq_norm,
)
from .wavelets import (
    CoefficientPyramid,
    WaveletFilter,
    build_filter,
    dwt_forward,
    dwt_inverse,
    wavelet_lp_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BesovIndices",
    "CoefficientPyramid",
    "ConfigError",
    "DataError",
    "DomainError",
    "EmbeddingReport",
    "EmpiricalCdf",
    "EstimatorConfig",
    "FitResult",
    "LrdProcessSpec",
    "McConfig",
    "McReport",
    "McRow",
    "PhaseDiagnosis",
    "RegressionSample",
    "ShapeError",
    "SigmaProfile",
    "SlopeReport",
    "ThresholdPlan",
    "WarpwaveError",
    "WaveletFilter",
    "apply_threshold",
    "besov_seminorm",
    "build_filter",
    "classify_phase",
    "compute_thresholds",
    "dwt_forward",
    "dwt_inverse",
    "embedding_check",
    "empirical_cdf",
    "empirical_coefficients",
    "estimate_alpha",
    "estimate_function",
    "estimate_shape",
    "estimate_sigma_profile",
    "eval_target",
    "farima_coefficients",
    "fitted_on_design_grid",
    "generate_lrd",
    "lrd_level_weights",
    "marginal_variance",
    "order_pairs",
    "rate_exponents",
    "rate_slope_experiment",
    "run_mc",
    "run_replication",
    "scenario_sigma",
    "snr_standardize",
    "theoretical_risk",
    "variance_scaling_probe",
    "wavelet_lp_norm",
    "weak_lq_norm",
]
