"""Thresholding estimators for regression on a warped design.

Two threshold families are provided on the 1/sqrt(n) coefficient scale:

* ``dj_universal``: lambda_j = sigma_w sqrt(2 ln n)/sqrt(n) at every level,
  the classical universal threshold.
* ``lrd_level``: lambda_j = sigma_w max(ln n/sqrt(n),
  1{m_j > tol} sqrt(ln n)/n^(alpha/2)), where m_j measures how much the
  noise profile varies at level j.  For a flat profile every m_j is zero,
  the indicator never fires, and the plan does not depend on alpha at all.

Natural logarithms are used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .design import (
    RegressionSample,
    empirical_coefficients,
    fitted_on_design_grid,
    order_pairs,
)
from .errors import ConfigError, DomainError, ShapeError
from .noise import estimate_alpha
from .wavelets import CoefficientPyramid, WaveletFilter, build_filter, dwt_forward

_POLICIES = ("hard", "soft")
_SOURCES = ("dj_universal", "lrd_level")
_TAU0_MODES = ("global_finest", "by_level")
_ADAPTIVITY = ("partial", "full")

# weight below this fraction of the largest one counts as "flat profile"
_WEIGHT_TOL_FRACTION = 1e-3


@dataclass(frozen=True)
class ThresholdPlan:
    policy: str
    source: str
    tau0_mode: str
    per_level: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.policy not in _POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.source not in _SOURCES:
            raise ConfigError(f"unknown threshold source {self.source!r}")
        if self.tau0_mode not in _TAU0_MODES:
            raise ConfigError(f"unknown tau0_mode {self.tau0_mode!r}")
        object.__setattr__(self, "per_level", tuple(float(v) for v in self.per_level))
        if any(v < 0 for v in self.per_level):
            raise DomainError("thresholds must be nonnegative")


@dataclass(frozen=True)
class SigmaProfile:
    """Estimated (or known) noise level at each rank position."""

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ShapeError("profile must be a nonempty vector")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise DomainError("profile values must be finite and nonnegative")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class FitResult:
    fitted: np.ndarray
    pyramid_kept: CoefficientPyramid
    plan: ThresholdPlan
    alpha_used: float
    metadata: dict


@dataclass(frozen=True)
class EstimatorConfig:
    """Everything an estimator run needs besides the data.

    ``alpha = None`` asks for a log-periodogram estimate from pilot
    residuals when the threshold family needs one.  ``sigma_profile``
    overrides the estimated noise profile with a known one.
    ``lrd_branch_weighting`` replaces the 0/1 indicator in the level
    thresholds by the relative weight m_j / max m_j.
    """

    wavelet: str = "db6"
    policy: str = "hard"
    source: str = "lrd_level"
    adaptivity: str = "partial"
    alpha: Optional[float] = None
    tau0_mode: str = "global_finest"
    tau0_scale: float = 1.0
    coarse_level: int = 0
    length_mode: str = "strict"
    sigma_profile: Optional[np.ndarray] = None
    lrd_branch_weighting: bool = False

    def __post_init__(self) -> None:
        if self.policy not in _POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.source not in _SOURCES:
            raise ConfigError(f"unknown threshold source {self.source!r}")
        if self.tau0_mode not in _TAU0_MODES:
            raise ConfigError(f"unknown tau0_mode {self.tau0_mode!r}")
        if self.adaptivity not in _ADAPTIVITY:
            raise ConfigError(f"unknown adaptivity mode {self.adaptivity!r}")
        if self.tau0_scale <= 0:
            raise DomainError("tau0_scale must be positive")


def _mad_sigma(values: np.ndarray) -> float:
    med = np.median(values)
    return float(np.median(np.abs(values - med)) / 0.6745)


def compute_thresholds(
    n: int,
    pyramid: CoefficientPyramid,
    source: str,
    policy: str,
    alpha_hat: float,
    weights=None,
    tau0_mode: str = "global_finest",
    tau0_scale: float = 1.0,
    weighted_branch: bool = False,
) -> ThresholdPlan:
    """Build a per-level threshold plan from an empirical pyramid.

    The noise scale sigma_w is the median absolute deviation of the raw
    (sqrt(n)-scale) finest-level coefficients divided by 0.6745, either
    shared across levels (``global_finest``) or recomputed per level
    (``by_level``).
    """
    if source not in _SOURCES:
        raise ConfigError(f"unknown threshold source {source!r}")
    if not 0.0 < alpha_hat <= 1.0:
        raise DomainError(f"alpha_hat must lie in (0, 1], got {alpha_hat}")
    n_levels = len(pyramid.details)
    if weights is None:
        weights = np.zeros(n_levels)
    weights = np.asarray(weights, dtype=np.float64)
    if weights.size != n_levels:
        raise ShapeError("weights must cover exactly the pyramid's detail levels")

    root_n = math.sqrt(n)
    if tau0_mode == "global_finest":
        sigma = _mad_sigma(pyramid.details[-1] * root_n) * tau0_scale
        sigmas = [sigma] * n_levels
    elif tau0_mode == "by_level":
        sigmas = [_mad_sigma(d * root_n) * tau0_scale for d in pyramid.details]
    else:
        raise ConfigError(f"unknown tau0_mode {tau0_mode!r}")

    log_n = math.log(n)
    tol = _WEIGHT_TOL_FRACTION * float(weights.max()) if weights.size else 0.0
    lambdas = []
    for i, sigma in enumerate(sigmas):
        if source == "dj_universal":
            lam = sigma * math.sqrt(2.0 * log_n) / root_n
        else:
            universal_part = log_n / root_n
            lrd_part = math.sqrt(log_n) / n ** (alpha_hat / 2.0)
            if weighted_branch:
                w_max = float(weights.max())
                gate = weights[i] / w_max if w_max > 0 else 0.0
            else:
                gate = 1.0 if weights[i] > tol else 0.0
            lam = sigma * max(universal_part, gate * lrd_part)
        lambdas.append(lam)
    return ThresholdPlan(policy, source, tau0_mode, tuple(lambdas))


def apply_threshold(pyramid: CoefficientPyramid, plan: ThresholdPlan) -> CoefficientPyramid:
    """Shrink detail coefficients level by level; the scaling block is kept."""
    if len(plan.per_level) != len(pyramid.details):
        raise ShapeError(
            f"plan has {len(plan.per_level)} levels, pyramid {len(pyramid.details)}"
        )
    kept = []
    for d, lam in zip(pyramid.details, plan.per_level):
        if plan.policy == "hard":
            kept.append(np.where(np.abs(d) >= lam, d, 0.0))
        else:
            kept.append(np.sign(d) * np.maximum(np.abs(d) - lam, 0.0))
    return pyramid.with_details(kept)


def _pilot_residuals(ordered_ys: np.ndarray, filt: WaveletFilter) -> np.ndarray:
    """Residuals (rank order) from a hard universal-threshold pilot fit."""
    n = ordered_ys.size
    grid = np.arange(n) / n
    pyramid = empirical_coefficients(RegressionSample(grid, ordered_ys), filt)
    plan = compute_thresholds(n, pyramid, "dj_universal", "hard", 1.0)
    pilot = fitted_on_design_grid(apply_threshold(pyramid, plan), filt)
    return ordered_ys - pilot


def estimate_sigma_profile(sample: RegressionSample, filt: WaveletFilter) -> SigmaProfile:
    """Piecewise-constant noise level on the rank grid.

    A universal-threshold pilot fit supplies residuals; their squares get
    averaged inside ceil(n^(1/3)) equal-rank bins and the square roots are
    broadcast back over the grid.
    """
    n = sample.n
    if n < 64:
        raise DomainError(f"need at least 64 observations, got {n}")
    if n & (n - 1):
        raise ShapeError(f"sample size {n} is not a power of two")
    ordered, _ = order_pairs(sample)
    residuals = _pilot_residuals(ordered, filt)
    return _profile_from_residuals(residuals, n)


def lrd_level_weights(
    profile: SigmaProfile, filt: WaveletFilter, coarse_level: int = 0
) -> np.ndarray:
    """Mean absolute detail coefficient of the noise profile, per level.

    Computed on the same 1/sqrt(n) scale as the empirical coefficients, so
    a constant profile yields exact zeros at every level.
    """
    vals = profile.values
    n = vals.size
    if n & (n - 1) or n < 2:
        raise ShapeError(f"profile length {n} is not a power of two")
    raw = dwt_forward(vals, filt, coarse_level)
    weights = np.array([np.mean(np.abs(d)) / math.sqrt(n) for d in raw.details])
    # a constant profile must give exact zeros, but the highpass taps only
    # cancel to machine precision; flush anything at rounding-noise scale
    floor = 1e-12 * float(np.mean(vals))
    return np.where(weights > floor, weights, 0.0)


def _full_cutoff_level(n: int) -> int:
    """Level j1 with 2^j1 = floor(sqrt(n / ln n)) rounded down to a power of two."""
    t = int(math.floor(math.sqrt(n / math.log(n))))
    if t < 1:
        return 0
    return t.bit_length() - 1


def _fit(sample: RegressionSample, config: EstimatorConfig, drop_scaling: bool) -> FitResult:
    filt = build_filter(config.wavelet)
    ordered, permutation = order_pairs(sample)
    n = ordered.size
    if n & (n - 1):
        if config.length_mode != "truncate":
            raise ShapeError(f"sample size {n} is not a power of two")
        keep = 1 << (n.bit_length() - 1)
        idx = (np.arange(keep) * n) // keep
        ordered, permutation = ordered[idx], permutation[idx]
        n = keep
    grid = np.arange(n) / n
    ordered_sample = RegressionSample(grid, ordered)
    pyramid = empirical_coefficients(
        ordered_sample, filt, coarse_level=config.coarse_level
    )

    residuals = None
    if config.source == "lrd_level":
        if config.sigma_profile is not None:
            profile = SigmaProfile(config.sigma_profile)
            if profile.values.size != n:
                raise ShapeError("sigma_profile length must match the sample")
        else:
            residuals = _pilot_residuals(ordered, filt)
            profile = _profile_from_residuals(residuals, n)
        weights = lrd_level_weights(profile, filt, config.coarse_level)
    else:
        weights = np.zeros(len(pyramid.details))

    if config.alpha is not None:
        alpha_used = float(config.alpha)
    elif config.source == "lrd_level":
        if residuals is None:
            residuals = _pilot_residuals(ordered, filt)
        time_order = np.argsort(permutation, kind="stable")
        alpha_used = estimate_alpha(residuals[time_order])
    else:
        alpha_used = math.nan

    plan = compute_thresholds(
        n,
        pyramid,
        config.source,
        config.policy,
        alpha_used if not math.isnan(alpha_used) else 1.0,
        weights,
        config.tau0_mode,
        tau0_scale=config.tau0_scale,
        weighted_branch=config.lrd_branch_weighting,
    )
    kept = apply_threshold(pyramid, plan)

    if config.adaptivity == "partial":
        j1 = pyramid.fine_level
    else:
        j1 = _full_cutoff_level(n)
    details = [
        d if level <= j1 else np.zeros_like(d)
        for level, d in zip(kept.levels(), kept.details)
    ]
    scaling = np.zeros_like(kept.scaling) if drop_scaling else kept.scaling
    pyramid_kept = CoefficientPyramid(kept.coarse_level, scaling, tuple(details))
    fitted = fitted_on_design_grid(pyramid_kept, filt)
    retained = tuple(int(np.count_nonzero(d)) for d in pyramid_kept.details)
    metadata = {"retained_per_level": retained, "j1": int(j1), "n": int(n)}
    return FitResult(fitted, pyramid_kept, plan, alpha_used, metadata)


def _profile_from_residuals(residuals: np.ndarray, n: int) -> SigmaProfile:
    if n < 64:
        raise DomainError(f"need at least 64 observations, got {n}")
    n_bins = math.ceil(n ** (1.0 / 3.0))
    values = np.empty(n)
    start = 0
    for chunk in np.array_split(residuals**2, n_bins):
        values[start : start + chunk.size] = math.sqrt(float(np.mean(chunk)))
        start += chunk.size
    return SigmaProfile(values)


def estimate_function(sample: RegressionSample, config: EstimatorConfig = EstimatorConfig()) -> FitResult:
    """Threshold estimate of the regression function on the rank grid."""
    return _fit(sample, config, drop_scaling=False)


def estimate_shape(sample: RegressionSample, config: EstimatorConfig = EstimatorConfig()) -> FitResult:
    """Centered variant: the scaling block is zeroed before synthesis.

    Targets the shape f minus its design-weighted mean, which stays
    estimable at the usual rates however strong the dependence is.
    """
    return _fit(sample, config, drop_scaling=True)
