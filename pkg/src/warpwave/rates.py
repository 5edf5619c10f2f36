"""Convergence-rate exponents, phase classification, and Besov functionals.

The minimax rate for p-th power loss is n^(-(p/2) gamma) (ln n)^kappa, where
gamma and kappa depend on where the smoothness/dependence pair falls among
three regimes: a dense phase, a sparse phase, and a dependence-dominated
phase in which long memory dictates the rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .wavelets import CoefficientPyramid


@dataclass(frozen=True)
class BesovIndices:
    """Smoothness indices (s, pi, r) of a Besov ball."""

    s: float
    pi: float
    r: float

    def __post_init__(self) -> None:
        if self.pi <= 0 or self.r <= 0:
            raise DomainError("pi and r must be positive")

    @property
    def theorem_scope(self) -> bool:
        """True when the indices satisfy s > max(1/pi, 1/2)."""
        return self.s > max(1.0 / self.pi, 0.5)


@dataclass(frozen=True)
class PhaseDiagnosis:
    phase: str
    gamma: float
    kappa: float
    alpha_D: float
    alpha_S: float


def rate_exponents(s: float, pi: float, p: float) -> tuple[float, float]:
    """The dense and sparse rate exponents (alpha_D, alpha_S).

    alpha_D = 2s/(2s + 1) and
    alpha_S = 2(s - (1/pi - 1/p)) / (2(s - 1/pi) + 1).
    The sparse exponent blows up when its denominator hits zero, which is
    the only hard domain restriction; values of s below 1/pi are allowed
    (they fall outside the theorem scope but the formulas stay meaningful).
    """
    if pi < 1:
        raise DomainError(f"pi must be >= 1, got {pi}")
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    denom = 2.0 * (s - 1.0 / pi) + 1.0
    if denom <= 0:
        raise DomainError(
            f"sparse exponent undefined: 2(s - 1/pi) + 1 = {denom} <= 0"
        )
    alpha_D = 2.0 * s / (2.0 * s + 1.0)
    alpha_S = 2.0 * (s - (1.0 / pi - 1.0 / p)) / denom
    return alpha_D, alpha_S


def classify_phase(s: float, pi: float, p: float, alpha: float) -> PhaseDiagnosis:
    """Place (s, pi, p, alpha) in the dense / sparse / lrd phase diagram.

    The dependence-dominated phase is the inclusive region
    alpha <= min(alpha_S, alpha_D); above it, the dense and sparse phases
    split at s = (p - pi)/(2 pi).  Sitting exactly on that vertical line
    (where both exponents coincide) returns the explicit marker
    ``boundary`` instead of an arbitrary side.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    alpha_D, alpha_S = rate_exponents(s, pi, p)
    if alpha <= min(alpha_S, alpha_D):
        return PhaseDiagnosis("lrd", alpha, 1.0, alpha_D, alpha_S)
    s_split = (p - pi) / (2.0 * pi)
    if s > s_split:
        gamma = alpha_D
        phase = "dense"
    elif s < s_split:
        gamma = alpha_S
        phase = "sparse"
    else:
        gamma = alpha_D
        phase = "boundary"
    return PhaseDiagnosis(phase, gamma, p * gamma, alpha_D, alpha_S)


def besov_seminorm(pyramid: CoefficientPyramid, idx: BesovIndices) -> float:
    """Sequence-space Besov seminorm of the detail coefficients.

    ( sum_j [ 2^(j(s + 1/2 - 1/pi)) (sum_k |b_jk|^pi)^(1/pi) ]^r )^(1/r),
    with the usual maximum when r is infinite.
    """
    s, pi, r = idx.s, idx.pi, idx.r
    level_terms = []
    for level, coeffs in zip(pyramid.levels(), pyramid.details):
        block = float(np.sum(np.abs(coeffs) ** pi)) ** (1.0 / pi)
        level_terms.append(2.0 ** (level * (s + 0.5 - 1.0 / pi)) * block)
    if not level_terms:
        return 0.0
    if math.isinf(r):
        return max(level_terms)
    return float(np.sum(np.asarray(level_terms) ** r) ** (1.0 / r))


def weak_lq_norm(
    pyramid: CoefficientPyramid, q: float, p: float, psi_p_norm: float
) -> float:
    """Weak-lq functional of the detail coefficients.

    Each coefficient at level j carries mass 2^(j(p/2 - 1)) psi_p_norm^p;
    the norm is sup over b of b^q times the mass of coefficients with
    magnitude at least b, and the supremum is attained at one of the
    distinct magnitudes, so an exact sort-and-scan suffices.
    """
    if q <= 0 or p <= 0:
        raise DomainError("q and p must be positive")
    mags = []
    masses = []
    for level, coeffs in zip(pyramid.levels(), pyramid.details):
        mass = 2.0 ** (level * (p / 2.0 - 1.0)) * psi_p_norm**p
        mags.append(np.abs(np.asarray(coeffs)))
        masses.append(np.full(coeffs.size, mass))
    if not mags:
        return 0.0
    mag = np.concatenate(mags)
    mass = np.concatenate(masses)
    keep = mag > 0
    if not np.any(keep):
        return 0.0
    mag, mass = mag[keep], mass[keep]
    order = np.argsort(mag)[::-1]
    mag, mass = mag[order], mass[order]
    cum = np.cumsum(mass)
    # last occurrence of each magnitude in descending order carries the
    # full mass of coefficients at least that large
    best = 0.0
    for i in range(mag.size):
        if i + 1 < mag.size and mag[i + 1] == mag[i]:
            continue
        best = max(best, mag[i] ** q * cum[i])
    return float(best)


@dataclass(frozen=True)
class EmbeddingReport:
    holds: bool
    ratio: float
    q: float


def embedding_check(
    pyramid: CoefficientPyramid,
    idx: BesovIndices,
    p: float,
    psi_p_norm: float = 1.0,
) -> EmbeddingReport:
    """Compare the weak-lq functional against the Besov seminorm.

    q is p/(2s + 1).  The report's ratio is weak / seminorm^q, which is
    scale-invariant; it is diagnostic only since the embedding constant
    is not quantified.
    """
    q = p / (2.0 * idx.s + 1.0)
    if idx.pi <= 2.0 / (2.0 * idx.s + 1.0):
        raise DomainError(
            f"hypothesis pi > 2/(2s+1) violated: {idx.pi} <= {2.0 / (2.0 * idx.s + 1.0)}"
        )
    if idx.pi <= q:
        raise DomainError(f"hypothesis pi > p/(2s+1) violated: {idx.pi} <= {q}")
    weak = weak_lq_norm(pyramid, q, p, psi_p_norm)
    semi = besov_seminorm(pyramid, idx)
    if semi == 0.0:
        ratio = 0.0 if weak == 0.0 else math.inf
    else:
        ratio = weak / semi**q
    return EmbeddingReport(holds=math.isfinite(ratio), ratio=float(ratio), q=float(q))


def theoretical_risk(n: int, diag: PhaseDiagnosis, p: float) -> float:
    """Unit-constant risk bound n^(-(p/2) gamma) (ln n)^kappa."""
    if n < 2:
        raise DomainError("n must be at least 2")
    return float(n ** (-(p / 2.0) * diag.gamma) * math.log(n) ** diag.kappa)
