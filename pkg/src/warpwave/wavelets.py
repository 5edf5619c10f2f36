"""Orthonormal wavelet filters and the periodized pyramid transform.

The transform is the classic Mallat cascade on dyadic-length signals with
circular (periodic) boundary handling.  Analysis uses correlation form,

    approx[k] = sum_m h[m] * a[(2k + m) mod N],
    detail[k] = sum_m g[m] * a[(2k + m) mod N],

with the quadrature-mirror highpass g[k] = (-1)^k h[L-1-k].  Synthesis is the
exact adjoint, so the round trip is the identity up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, ShapeError

# Daubechies extremal-phase lowpass filters, unit-energy normalization
# (sum of coefficients = sqrt(2)).  Recomputed from the spectral
# factorization of the Daubechies polynomial at 60-digit precision and
# rounded once to double.
_LOWPASS: dict[str, tuple[float, ...]] = {
    "haar": (
        0.7071067811865476,
        0.7071067811865476,
    ),
    "db2": (
        0.48296291314453416,
        0.83651630373780794,
        0.22414386804201339,
        -0.12940952255126037,
    ),
    "db4": (
        0.23037781330889651,
        0.71484657055291567,
        0.63088076792985892,
        -0.027983769416859854,
        -0.18703481171909309,
        0.030841381835560764,
        0.032883011666885197,
        -0.010597401785069032,
    ),
    "db6": (
        0.11154074335010947,
        0.49462389039845306,
        0.75113390802109536,
        0.31525035170919763,
        -0.22626469396543983,
        -0.12976686756726194,
        0.097501605587323043,
        0.027522865530305727,
        -0.03158203931748603,
        0.00055384220116149613,
        0.0047772575109455108,
        -0.0010773010853084796,
    ),
}


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WaveletFilter:
    """An orthonormal filter pair plus the metadata the estimators need."""

    name: str
    lowpass: np.ndarray
    highpass: np.ndarray
    vanishing_moments: int

    @property
    def length(self) -> int:
        return int(self.lowpass.size)


def build_filter(name: str) -> WaveletFilter:
    """Look up a filter bank by name ("haar", "db2", "db4", "db6").

    Names are matched case-insensitively.  Anything outside the supported
    family raises :class:`ConfigError`.
    """
    key = str(name).strip().lower()
    if key not in _LOWPASS:
        supported = ", ".join(sorted(_LOWPASS))
        raise ConfigError(f"unknown wavelet {name!r}; supported: {supported}")
    h = _readonly(_LOWPASS[key])
    L = h.size
    g = _readonly([(-1.0) ** k * h[L - 1 - k] for k in range(L)])
    return WaveletFilter(name=key, lowpass=h, highpass=g, vanishing_moments=L // 2)


@dataclass(frozen=True)
class CoefficientPyramid:
    """Wavelet coefficients of a dyadic signal.

    ``scaling`` holds the 2**coarse_level approximation coefficients and
    ``details[i]`` the detail coefficients at level ``coarse_level + i``
    (so the last entry is the finest level).  Arrays are stored read-only;
    use :meth:`with_details` to build a modified copy.
    """

    coarse_level: int
    scaling: np.ndarray
    details: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if self.coarse_level < 0:
            raise DomainError("coarse_level must be nonnegative")
        object.__setattr__(self, "scaling", _readonly(self.scaling))
        object.__setattr__(
            self, "details", tuple(_readonly(d) for d in self.details)
        )
        if self.scaling.ndim != 1 or self.scaling.size != 2**self.coarse_level:
            raise ShapeError(
                f"scaling block must have length 2**{self.coarse_level}"
            )
        for i, d in enumerate(self.details):
            expected = 2 ** (self.coarse_level + i)
            if d.ndim != 1 or d.size != expected:
                raise ShapeError(
                    f"detail block {i} must have length {expected}, got {d.size}"
                )

    @property
    def fine_level(self) -> int:
        return self.coarse_level + len(self.details) - 1

    @property
    def n(self) -> int:
        """Length of the signal the pyramid represents."""
        return 2 ** (self.fine_level + 1) if self.details else 2**self.coarse_level

    def levels(self) -> range:
        return range(self.coarse_level, self.coarse_level + len(self.details))

    def detail(self, level: int) -> np.ndarray:
        if not self.coarse_level <= level <= self.fine_level:
            raise DomainError(f"no detail level {level} in this pyramid")
        return self.details[level - self.coarse_level]

    def with_details(self, details) -> "CoefficientPyramid":
        return CoefficientPyramid(self.coarse_level, self.scaling, tuple(details))


def _analysis_step(a: np.ndarray, filt: WaveletFilter):
    N = a.size
    base = 2 * np.arange(N // 2)
    approx = np.zeros(N // 2)
    detail = np.zeros(N // 2)
    for m in range(filt.length):
        window = a[(base + m) % N]
        approx += filt.lowpass[m] * window
        detail += filt.highpass[m] * window
    return approx, detail


def _synthesis_step(approx: np.ndarray, detail: np.ndarray, filt: WaveletFilter) -> np.ndarray:
    N = 2 * approx.size
    base = 2 * np.arange(approx.size)
    out = np.zeros(N)
    for m in range(filt.length):
        # for fixed m the targets (2k + m) mod N are all distinct
        out[(base + m) % N] += filt.lowpass[m] * approx + filt.highpass[m] * detail
    return out


def dwt_forward(
    signal, filt: WaveletFilter, coarse_level: int = 0
) -> CoefficientPyramid:
    """Full periodized wavelet analysis of a power-of-two length signal."""
    a = np.asarray(signal, dtype=np.float64)
    if a.ndim != 1:
        raise ShapeError("signal must be one-dimensional")
    n = a.size
    if n < 2 or n & (n - 1):
        raise ShapeError(f"signal length must be a power of two >= 2, got {n}")
    J = n.bit_length() - 1
    if not 0 <= coarse_level < J:
        raise DomainError(f"coarse_level must lie in [0, {J}), got {coarse_level}")
    details: list[np.ndarray] = []
    for _ in range(J - coarse_level):
        a, d = _analysis_step(a, filt)
        details.append(d)
    return CoefficientPyramid(coarse_level, a, tuple(reversed(details)))


def dwt_inverse(pyramid: CoefficientPyramid, filt: WaveletFilter) -> np.ndarray:
    """Reconstruct the signal a pyramid was computed from."""
    a = np.asarray(pyramid.scaling, dtype=np.float64)
    for d in pyramid.details:
        a = _synthesis_step(a, d, filt)
    return a


def wavelet_lp_norm(filt: WaveletFilter, p: float, refinement_depth: int = 12) -> float:
    """Lp norm of the mother wavelet, via the cascade on a dyadic grid.

    Synthesizes a single unit detail coefficient placed far enough below the
    finest level that the periodized wavelet does not overlap itself, samples
    it on a grid of 2**refinement_depth points, and evaluates the Riemann sum
    of |psi|^p.
    """
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if refinement_depth < 8:
        raise DomainError("refinement_depth must be at least 8")
    support = 2 * filt.vanishing_moments - 1
    j = max(2, math.ceil(math.log2(support))) if support > 1 else 2
    if j >= refinement_depth:
        raise DomainError("refinement_depth too small for this filter length")
    fine = refinement_depth - 1
    details = []
    for level in range(j, fine + 1):
        d = np.zeros(2**level)
        if level == j:
            d[0] = 1.0
        details.append(d)
    pyramid = CoefficientPyramid(j, np.zeros(2**j), tuple(details))
    x = dwt_inverse(pyramid, filt)
    n = x.size
    riemann = (n ** (p / 2.0 - 1.0) * np.sum(np.abs(x) ** p)) ** (1.0 / p)
    return float(2.0 ** (-j * (0.5 - 1.0 / p)) * riemann)
