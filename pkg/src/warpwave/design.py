"""Random-design handling via the rank-based ordered-sample proxy.

Regression on a random design is reduced to a regular-grid problem by
sorting the pairs (X_i, Y_i) by X and treating the ordered responses as
observations on the grid i/n.  Because the construction depends on the
ranks of the design points only, it simultaneously realizes the warped
estimator for a known design law and for the empirical one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, ShapeError
from .wavelets import CoefficientPyramid, WaveletFilter, dwt_forward, dwt_inverse


@dataclass(frozen=True)
class RegressionSample:
    """Paired design points and responses."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=np.float64)
        ys = np.asarray(self.ys, dtype=np.float64)
        if xs.ndim != 1 or ys.ndim != 1:
            raise ShapeError("xs and ys must be one-dimensional")
        if xs.size != ys.size:
            raise ShapeError(f"length mismatch: {xs.size} xs vs {ys.size} ys")
        if xs.size == 0:
            raise ShapeError("sample must be nonempty")
        if not np.all(np.isfinite(xs)):
            raise DataError("design points must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return int(self.xs.size)


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous empirical distribution function."""

    sorted_xs: np.ndarray

    def __call__(self, x):
        ranks = np.searchsorted(self.sorted_xs, x, side="right")
        return ranks / self.sorted_xs.size


def empirical_cdf(xs) -> EmpiricalCdf:
    arr = np.asarray(xs, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError("need a nonempty one-dimensional sample")
    if not np.all(np.isfinite(arr)):
        raise DataError("sample values must be finite")
    return EmpiricalCdf(np.sort(arr))


def order_pairs(sample: RegressionSample):
    """Sort responses by their design point, ties broken by original index.

    Returns (ordered_ys, permutation) with ordered_ys[i] = ys[permutation[i]].
    """
    permutation = np.argsort(sample.xs, kind="stable")
    return sample.ys[permutation], permutation


def _thin_to_dyadic(values: np.ndarray) -> np.ndarray:
    """Keep 2**J near-equispaced entries of an ordered sequence."""
    n = values.size
    target = 1 << (n.bit_length() - 1)
    if target == n:
        return values
    idx = (np.arange(target) * n) // target
    return values[idx]


def empirical_coefficients(
    sample: RegressionSample,
    filt: WaveletFilter,
    coarse_level: int = 0,
    mode: str = "strict",
    split: bool = False,
) -> CoefficientPyramid:
    """Warped empirical wavelet coefficients of a regression sample.

    The default path sorts the responses by design rank and applies the
    periodized analysis transform, scaling every coefficient by 1/sqrt(n).
    In ``mode="truncate"`` a non-dyadic sample is thinned (after sorting)
    to the largest power of two by near-equispaced subsampling; ``strict``
    mode rejects such samples instead.

    With ``split=True`` the first half of the sample builds the empirical
    distribution function and the second half supplies the responses: each
    response lands in the grid cell given by its rank among the first-half
    design points (clamped to the grid), and cell sums are transformed.
    This mirrors the two-sample construction used in the theory; the
    default single-sample proxy is what the simulations use.
    """
    if mode not in ("strict", "truncate"):
        raise ConfigError(f"unknown mode {mode!r}; use 'strict' or 'truncate'")

    if split:
        if sample.n % 2:
            raise ShapeError("split mode needs an even sample size")
        half = sample.n // 2
        grid_xs = np.sort(sample.xs[:half])
        xs2 = sample.xs[half:]
        ys2 = sample.ys[half:]
        n = half
        if n & (n - 1):
            if mode == "strict":
                raise ShapeError(f"half-sample size {n} is not a power of two")
            keep = 1 << (n.bit_length() - 1)
            grid_xs = _thin_to_dyadic(grid_xs)
            xs2, ys2 = xs2[:keep], ys2[:keep]
            n = keep
        ranks = np.searchsorted(grid_xs, xs2, side="right")
        cells = np.minimum(ranks, n - 1)
        z = np.bincount(cells, weights=ys2, minlength=n)
        return _scaled_pyramid(z, filt, coarse_level, n)

    ordered, _ = order_pairs(sample)
    n = ordered.size
    if n & (n - 1):
        if mode == "strict":
            raise ShapeError(f"sample size {n} is not a power of two")
        ordered = _thin_to_dyadic(ordered)
        n = ordered.size
    return _scaled_pyramid(ordered, filt, coarse_level, n)


def _scaled_pyramid(
    values: np.ndarray, filt: WaveletFilter, coarse_level: int, n: int
) -> CoefficientPyramid:
    raw = dwt_forward(values, filt, coarse_level)
    scale = 1.0 / np.sqrt(n)
    return CoefficientPyramid(
        raw.coarse_level,
        raw.scaling * scale,
        tuple(d * scale for d in raw.details),
    )


def fitted_on_design_grid(
    pyramid: CoefficientPyramid, filt: WaveletFilter
) -> np.ndarray:
    """Synthesize the fit on the rank grid i/n.

    Exact inverse of :func:`empirical_coefficients` when no coefficients
    were modified; entry i estimates f at the i-th order statistic of the
    design, which for a uniform design is the grid point i/n.
    """
    return dwt_inverse(pyramid, filt) * np.sqrt(pyramid.n)
