"""Long-range dependent Gaussian noise: simulation and memory estimation.

The noise is a truncated moving average of i.i.d. standard Gaussians with
FARIMA(0, d, 0) weights, where the fractional integration parameter d and
the dependence index alpha are tied by d = (1 - alpha)/2.  Partial sums of
the process grow like n^(2 - alpha), which is what the scaling probe checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import DomainError


@dataclass(frozen=True)
class LrdProcessSpec:
    """Parameters of a simulated long-memory noise source.

    ``truncation`` is the moving-average cutoff M; it must be at least the
    length of any series generated with these parameters.
    """

    alpha: float
    truncation: int = 10_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.truncation < 1:
            raise DomainError("truncation must be a positive integer")

    @property
    def d(self) -> float:
        return (1.0 - self.alpha) / 2.0

    @classmethod
    def from_d(cls, d: float, truncation: int = 10_000, seed: int = 0) -> "LrdProcessSpec":
        if not 0.0 <= d < 0.5:
            raise DomainError(f"d must lie in [0, 1/2), got {d}")
        return cls(alpha=1.0 - 2.0 * d, truncation=truncation, seed=seed)


def farima_coefficients(d: float, count: int) -> np.ndarray:
    """Moving-average weights a_0..a_count of a FARIMA(0, d, 0) process.

    a_0 = 1 and a_m = a_{m-1} (m - 1 + d)/m, which decays like
    m^(d-1)/Gamma(d) for d > 0 and vanishes identically for d = 0.
    """
    if not 0.0 <= d < 0.5:
        raise DomainError(f"d must lie in [0, 1/2), got {d}")
    if count < 0:
        raise DomainError("count must be nonnegative")
    m = np.arange(1, count + 1, dtype=np.float64)
    out = np.empty(count + 1)
    out[0] = 1.0
    if count:
        np.cumprod((m - 1.0 + d) / m, out=out[1:])
    return out


def marginal_variance(spec: LrdProcessSpec) -> float:
    """Variance of one noise value, sum of the squared MA weights."""
    a = farima_coefficients(spec.d, spec.truncation)
    return float(np.dot(a, a))


def generate_lrd(spec: LrdProcessSpec, n: int, replication: int) -> np.ndarray:
    """Draw one length-n noise path, deterministically per (spec, n, replication).

    Innovations come from an independent RNG stream keyed by
    (spec.seed, replication), so replications can run in any order or in
    parallel and still reproduce bit-identically.  Trailing zero weights
    (the d = 0 case) are dropped before convolving, which shrinks the
    burn-in to the effective filter support without changing the law.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if spec.truncation < n:
        raise DomainError(
            f"truncation {spec.truncation} is below the series length {n}"
        )
    a = farima_coefficients(spec.d, spec.truncation)
    support = int(np.max(np.nonzero(a)[0]))
    a = a[: support + 1]
    rng = np.random.default_rng([spec.seed, replication])
    eta = rng.standard_normal(support + n)
    if support == 0:
        return eta
    return sps.convolve(eta, a, mode="valid", method="auto")


def variance_scaling_probe(spec: LrdProcessSpec, n_grid, reps: int):
    """Estimate the growth exponent of Var(sum of the first n noise values).

    Generates ``reps`` independent paths of the largest grid length, records
    the partial sum at every grid point, and least-squares fits the log
    sample variance against log n.  Returns (slope, intercept); the slope
    estimates 2 - alpha.
    """
    grid = np.asarray(n_grid, dtype=np.int64)
    if grid.size < 4 or np.any(np.diff(grid) <= 0) or grid[0] < 1:
        raise DomainError("n_grid must be ascending with at least 4 points")
    if reps < 50:
        raise DomainError("need at least 50 replications")
    n_max = int(grid[-1])
    sums = np.empty((reps, grid.size))
    for rep in range(reps):
        path = generate_lrd(spec, n_max, rep)
        csum = np.cumsum(path)
        sums[rep] = csum[grid - 1]
    variances = np.var(sums, axis=0, ddof=1)
    slope, intercept = np.polyfit(np.log(grid), np.log(variances), 1)
    return float(slope), float(intercept)


def estimate_alpha(series) -> float:
    """Log-periodogram (GPH) estimate of the dependence index alpha.

    Regresses the log periodogram on log(4 sin^2(freq/2)) over the lowest
    floor(sqrt(n)) Fourier frequencies; alpha_hat = 1 - 2 d_hat, clamped
    to (0, 1].
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise DomainError("series must be one-dimensional")
    n = x.size
    if n < 256:
        raise DomainError(f"need at least 256 observations, got {n}")
    m = int(np.floor(np.sqrt(n)))
    spectrum = np.fft.rfft(x - x.mean())
    periodogram = np.abs(spectrum[1 : m + 1]) ** 2 / (2.0 * np.pi * n)
    if np.any(periodogram <= 0.0):
        raise DomainError("periodogram vanishes at a fitting frequency")
    freqs = 2.0 * np.pi * np.arange(1, m + 1) / n
    regressor = np.log(4.0 * np.sin(freqs / 2.0) ** 2)
    slope, _ = np.polyfit(regressor, np.log(periodogram), 1)
    d_hat = -float(slope)
    return float(np.clip(1.0 - 2.0 * d_hat, 1e-6, 1.0))
