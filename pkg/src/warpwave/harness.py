"""Experiment harness: benchmark targets, noise scenarios, Monte Carlo MSE.

Reproduces the simulation protocol the estimators were calibrated against:
uniform random design on [0, 1], a Doppler or Bumps target observed at
signal-to-noise 9.34 dB scale, long-memory Gaussian noise of index
d = (1 - alpha)/2, and mean squared error measured on the regular grid i/n
against the fitted rank-grid values.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .design import RegressionSample
from .errors import ConfigError, DomainError
from .estimators import EstimatorConfig, estimate_function, estimate_shape
from .noise import LrdProcessSpec, generate_lrd
from .rates import PhaseDiagnosis, classify_phase

_SNR_DB = 9.34

# standard eleven-bump test signal: locations, heights, widths
_BUMP_POS = (0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81)
_BUMP_HGT = (4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2)
_BUMP_WTH = (0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005)

# rescales the raw bump sum so its fluctuation power (variance over [0, 1],
# exact quadrature 0.44201183861059035) matches the 9.34 dB reference level
# 0.01 * 10**0.934 that the Doppler target carries without any scaling
_BUMP_SCALE = 0.44084208655845475

_TARGETS = ("doppler", "bumps")
_SCENARIOS = ("a", "b", "c")
_KINDS = ("function", "shape")

# moving-average cutoff used for experiment noise; large enough that the
# partial-sum variance of the strongest-memory case is not visibly starved
_EXPERIMENT_TRUNCATION = 1_000_000


def eval_target(name: str, grid) -> np.ndarray:
    """Evaluate a benchmark target on grid points in [0, 1]."""
    x = np.asarray(grid, dtype=np.float64)
    if x.size and (x.min() < 0.0 or x.max() > 1.0):
        raise DomainError("grid values must lie in [0, 1]")
    key = str(name).strip().lower()
    if key == "doppler":
        return np.sqrt(x * (1.0 - x)) * np.sin(2.0 * np.pi * 1.05 / (x + 0.05))
    if key == "bumps":
        out = np.zeros_like(x)
        for pos, hgt, wth in zip(_BUMP_POS, _BUMP_HGT, _BUMP_WTH):
            out += hgt * (1.0 + np.abs((x - pos) / wth)) ** -4.0
        return _BUMP_SCALE * out
    if key == "lidar":
        raise ConfigError("target 'lidar' has no published closed form; unavailable")
    raise ConfigError(f"unknown target {name!r}; supported: doppler, bumps")


def snr_standardize(values, sigma_ref: float):
    """Rescale a signal so its grid power sits 9.34 dB above sigma_ref^2.

    Returns (scaled values, achieved SNR in dB).
    """
    if sigma_ref <= 0:
        raise DomainError("sigma_ref must be positive")
    vals = np.asarray(values, dtype=np.float64)
    power = float(np.mean(vals**2))
    if power == 0.0:
        raise DomainError("cannot standardize an all-zero signal")
    target_power = sigma_ref**2 * 10.0 ** (_SNR_DB / 10.0)
    scaled = vals * math.sqrt(target_power / power)
    achieved = 10.0 * math.log10(float(np.mean(scaled**2)) / sigma_ref**2)
    return scaled, achieved


def scenario_sigma(name: str, x):
    """Noise level of scenario a, b, or c at design point(s) x."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise DomainError("x must lie in [0, 1]")
    key = str(name).strip().lower()
    if key == "a":
        out = np.full_like(arr, 0.1)
    elif key == "b":
        out = 0.1 * math.sqrt(12.0 / 13.0) * (arr + 0.5)
    elif key == "c":
        out = 0.1 * (np.sin(np.pi * arr) - np.sign(arr - 0.4))
    else:
        raise ConfigError(f"unknown scenario {name!r}; supported: a, b, c")
    return out if np.ndim(x) else float(out)


@dataclass(frozen=True)
class McConfig:
    """One Monte Carlo experiment: target, noise, estimator, and seeding."""

    target: str = "doppler"
    scenario: str = "a"
    n: int = 1024
    replications: int = 200
    d_grid: tuple[float, ...] = (0.0, 0.15, 0.30, 0.325, 0.35, 0.375, 0.40, 0.425, 0.45)
    wavelet: str = "db6"
    policy: str = "hard"
    source: str = "dj_universal"
    tau0_mode: str = "global_finest"
    adaptivity: str = "partial"
    alpha: Optional[float] = None
    estimator_kind: str = "function"
    master_seed: int = 42
    noise_truncation: Optional[int] = None

    def __post_init__(self) -> None:
        if self.target not in _TARGETS:
            raise ConfigError(f"unknown target {self.target!r}")
        if self.scenario not in _SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.estimator_kind not in _KINDS:
            raise ConfigError(f"unknown estimator_kind {self.estimator_kind!r}")
        if self.n < 2 or self.n & (self.n - 1):
            raise DomainError(f"n must be a power of two, got {self.n}")
        if self.replications < 1:
            raise DomainError("replications must be at least 1")
        object.__setattr__(self, "d_grid", tuple(float(d) for d in self.d_grid))
        if any(not 0.0 <= d < 0.5 for d in self.d_grid):
            raise DomainError("d values must lie in [0, 0.5)")

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(
            wavelet=self.wavelet,
            policy=self.policy,
            source=self.source,
            adaptivity=self.adaptivity,
            alpha=self.alpha,
            tau0_mode=self.tau0_mode,
        )

    def truncation_for(self, n: int) -> int:
        if self.noise_truncation is not None:
            return max(self.noise_truncation, n)
        return max(n, _EXPERIMENT_TRUNCATION)


@dataclass(frozen=True)
class McRow:
    d: float
    scenario: str
    target: str
    source: str
    policy: str
    mse_mean: float
    mse_stderr: float
    reps: int


@dataclass(frozen=True)
class McReport:
    rows: tuple[McRow, ...]

    def to_csv_text(self) -> str:
        lines = ["d,scenario,target,source,policy,mse_mean,mse_stderr,reps"]
        for r in self.rows:
            lines.append(
                f"{r.d:.17g},{r.scenario},{r.target},{r.source},{r.policy},"
                f"{r.mse_mean:.17g},{r.mse_stderr:.17g},{r.reps}"
            )
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows]}, indent=2) + "\n"

    def curve_csv_text(self) -> str:
        """d versus mean MSE, the data behind the dependence-effect curve."""
        lines = ["d,mse_mean"]
        for r in self.rows:
            lines.append(f"{r.d:.17g},{r.mse_mean:.17g}")
        return "\n".join(lines) + "\n"


def _target_values(config: McConfig, n: int):
    grid = np.arange(n) / n
    f_grid = eval_target(config.target, grid)
    if config.estimator_kind == "shape":
        f_grid = f_grid - f_grid.mean()
    return grid, f_grid


def run_replication(config: McConfig, d: float, rep: int, n: Optional[int] = None) -> float:
    """One Monte Carlo draw; deterministic in (config, d, rep, n).

    The design comes from the stream (master_seed, rep, 1) and the noise
    innovations from (master_seed, rep), so replications are independent
    and safe to compute in any order.
    """
    if not 0.0 <= d < 0.5:
        raise DomainError(f"d must lie in [0, 0.5), got {d}")
    n = config.n if n is None else n
    design_rng = np.random.default_rng([config.master_seed, rep, 1])
    xs = design_rng.uniform(size=n)
    noise_spec = LrdProcessSpec(
        alpha=1.0 - 2.0 * d,
        truncation=config.truncation_for(n),
        seed=config.master_seed,
    )
    eps = generate_lrd(noise_spec, n, rep)
    f_xs = eval_target(config.target, xs)
    ys = f_xs + scenario_sigma(config.scenario, xs) * eps
    sample = RegressionSample(xs, ys)
    estimator = estimate_shape if config.estimator_kind == "shape" else estimate_function
    fit = estimator(sample, config.estimator_config())
    _, f_grid = _target_values(config, n)
    return float(np.mean((fit.fitted - f_grid) ** 2))


def _mc_task(args) -> float:
    config, d, rep, n = args
    return run_replication(config, d, rep, n)


def _replication_matrix(config: McConfig, d: float, n: int, jobs: int) -> np.ndarray:
    tasks = [(config, d, rep, n) for rep in range(config.replications)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(_mc_task, tasks, chunksize=8))
    else:
        values = [_mc_task(t) for t in tasks]
    return np.asarray(values)


def run_mc(config: McConfig, jobs: int = 1) -> McReport:
    """Mean and standard error of the MSE over replications, per d.

    Results are reduced in replication order whatever the parallelism, so
    the report is bit-identical for any ``jobs``.
    """
    rows = []
    for d in config.d_grid:
        mses = _replication_matrix(config, d, config.n, jobs)
        mean = float(np.mean(mses))
        stderr = (
            float(np.std(mses, ddof=1) / math.sqrt(mses.size)) if mses.size > 1 else 0.0
        )
        rows.append(
            McRow(
                d=float(d),
                scenario=config.scenario,
                target=config.target,
                source=config.source,
                policy=config.policy,
                mse_mean=mean,
                mse_stderr=stderr,
                reps=config.replications,
            )
        )
    return McReport(tuple(rows))


@dataclass(frozen=True)
class SlopeReport:
    """Empirical log-log MSE slope next to the theory's plausible band."""

    empirical_slope: float
    per_n: tuple[tuple[int, float], ...]
    predicted: tuple[PhaseDiagnosis, ...]
    predicted_slope_range: tuple[float, float]


# smoothness values spanning what the benchmark targets plausibly have
_SLOPE_S_GRID = (0.66, 1.0, 1.5, 2.0, 3.0)


def rate_slope_experiment(config: McConfig, n_grid, d: float, jobs: int = 1):
    """Fit log mean-MSE against log n and compare with the predicted rates.

    Returns (empirical_slope, SlopeReport).  The predicted band collects
    the phase exponents gamma over a smoothness grid at p = 2, pi = 1 and
    alpha = 1 - 2d; the slope should fall near -gamma for the (unknown)
    smoothness of the target.
    """
    grid = [int(n) for n in n_grid]
    if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("n_grid must be ascending with at least 4 points")
    if any(n < 2 or n & (n - 1) for n in grid):
        raise DomainError("n_grid entries must be powers of two")
    means = []
    for n in grid:
        mses = _replication_matrix(config, d, n, jobs)
        means.append(float(np.mean(mses)))
    slope = float(np.polyfit(np.log(grid), np.log(means), 1)[0])
    alpha = 1.0 - 2.0 * d
    predicted = tuple(classify_phase(s, 1.0, 2.0, alpha) for s in _SLOPE_S_GRID)
    gammas = [diag.gamma for diag in predicted]
    report = SlopeReport(
        empirical_slope=slope,
        per_n=tuple(zip(grid, means)),
        predicted=predicted,
        predicted_slope_range=(-max(gammas), -min(gammas)),
    )
    return slope, report
