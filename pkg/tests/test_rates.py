"""Tests for rate exponents, phase classification, and Besov functionals."""

import math

import numpy as np
import pytest

from warpwave.errors import DomainError
from warpwave.rates import (
    BesovIndices,
    EmbeddingReport,
    besov_seminorm,
    classify_phase,
    embedding_check,
    rate_exponents,
    theoretical_risk,
    weak_lq_norm,
)
from warpwave.wavelets import CoefficientPyramid

# hand-evaluated with exact rational arithmetic:
# (s, pi, p, alpha, phase, gamma, kappa, alpha_D, alpha_S)
PHASE_TABLE = [
    (2.0, 1.0, 4.0, 0.9, "dense", 0.8, 3.2, 0.8, 0.8333333333333334),
    (2.0, 1.0, 4.0, 0.3, "lrd", 0.3, 1.0, 0.8, 0.8333333333333334),
    (1.5, 1.0, 4.0, 0.75, "lrd", 0.75, 1.0, 0.75, 0.75),
    (1.5, 1.0, 4.0, 0.9, "boundary", 0.75, 3.0, 0.75, 0.75),
    (1.2, 1.0, 4.0, 1.0, "sparse", 0.6428571428571429, 2.5714285714285716, 0.7058823529411765, 0.6428571428571429),
    (0.66, 2.0, 2.0, 1.0, "dense", 0.5689655172413793, 1.1379310344827587, 0.5689655172413793, 1.0),
    (1.0, 2.0, 6.0, 0.5, "lrd", 0.5, 1.0, 0.6666666666666666, 0.6666666666666666),
    (1.0, 2.0, 6.0, 0.8, "boundary", 0.6666666666666666, 4.0, 0.6666666666666666, 0.6666666666666666),
    (3.0, 2.0, 2.0, 1.0, "dense", 0.8571428571428571, 1.7142857142857142, 0.8571428571428571, 1.0),
    (0.5, 4.0, 4.0, 1.0, "dense", 0.5, 2.0, 0.5, 0.6666666666666666),
    (0.5, 4.0, 4.0, 0.5, "lrd", 0.5, 1.0, 0.5, 0.6666666666666666),
    (0.8, 1.0, 4.0, 1.0, "sparse", 0.16666666666666666, 0.6666666666666666, 0.6153846153846154, 0.16666666666666666),
    (0.8, 1.0, 4.0, 0.1, "lrd", 0.1, 1.0, 0.6153846153846154, 0.16666666666666666),
    (1.5, 2.0, 4.0, 0.6, "lrd", 0.6, 1.0, 0.75, 0.8333333333333334),
    (1.5, 2.0, 4.0, 0.95, "dense", 0.75, 3.0, 0.75, 0.8333333333333334),
    (0.66, 3.0, 6.0, 1.0, "dense", 0.5689655172413793, 3.413793103448276, 0.5689655172413793, 0.5967741935483871),
    (2.5, 1.5, 3.0, 0.7, "lrd", 0.7, 1.0, 0.8333333333333334, 0.9285714285714286),
    (2.5, 1.5, 3.0, 0.95, "dense", 0.8333333333333334, 2.5, 0.8333333333333334, 0.9285714285714286),
    (1.0, 1.0, 2.0, 1.0, "dense", 0.6666666666666666, 1.3333333333333333, 0.6666666666666666, 1.0),
    (1.0, 1.0, 2.0, 0.5, "lrd", 0.5, 1.0, 0.6666666666666666, 1.0),
]


def test_rate_exponents_worked_values():
    alpha_D, alpha_S = rate_exponents(1.0, 1.0, 4.0)
    assert alpha_D == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert alpha_S == pytest.approx(0.5, rel=1e-14)
    # dense exponent depends on s only
    assert rate_exponents(1.0, 2.0, 6.0)[0] == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_rate_exponents_validation():
    with pytest.raises(DomainError):
        rate_exponents(0.5, 1.0, 4.0)  # denominator hits zero
    with pytest.raises(DomainError):
        rate_exponents(1.0, 0.9, 4.0)
    with pytest.raises(DomainError):
        rate_exponents(1.0, 1.0, 1.5)
    with pytest.raises(DomainError):
        rate_exponents(-1.0, 1.0, 4.0)


def test_phase_table():
    for s, pi, p, alpha, phase, gamma, kappa, alpha_D, alpha_S in PHASE_TABLE:
        diag = classify_phase(s, pi, p, alpha)
        assert diag.phase == phase, (s, pi, p, alpha)
        assert diag.gamma == pytest.approx(gamma, rel=1e-12)
        assert diag.kappa == pytest.approx(kappa, rel=1e-12)
        assert diag.alpha_D == pytest.approx(alpha_D, rel=1e-12)
        assert diag.alpha_S == pytest.approx(alpha_S, rel=1e-12)


def test_classify_alpha_validation():
    with pytest.raises(DomainError):
        classify_phase(1.0, 1.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        classify_phase(1.0, 1.0, 2.0, 1.1)


def test_gamma_continuous_at_lrd_boundary():
    """The rate exponent matches from both sides of alpha = alpha_D."""
    at = classify_phase(2.0, 1.0, 4.0, 0.8)
    assert at.phase == "lrd"
    assert at.gamma == pytest.approx(0.8, rel=1e-14)
    above = classify_phase(2.0, 1.0, 4.0, 0.8 + 1e-9)
    assert above.phase == "dense"
    assert above.gamma == pytest.approx(0.8, rel=1e-9)


def test_partition_three_connected_regions():
    """Every grid point gets one phase and each phase is one blob."""
    s_grid = np.linspace(0.605, 2.995, 100)
    a_grid = np.linspace(0.05, 1.0, 100)
    labels = np.empty((100, 100), dtype=object)
    for i, s in enumerate(s_grid):
        for j, a in enumerate(a_grid):
            labels[i, j] = classify_phase(float(s), 1.0, 4.0, float(a)).phase
    names, counts = np.unique(labels, return_counts=True)
    assert set(names) == {"dense", "sparse", "lrd"}
    assert counts.sum() == 100 * 100

    def components(name):
        seen = np.zeros((100, 100), dtype=bool)
        found = 0
        for i in range(100):
            for j in range(100):
                if labels[i, j] != name or seen[i, j]:
                    continue
                found += 1
                stack = [(i, j)]
                seen[i, j] = True
                while stack:
                    a, b = stack.pop()
                    for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        x, y = a + da, b + db
                        if 0 <= x < 100 and 0 <= y < 100 and not seen[x, y] and labels[x, y] == name:
                            seen[x, y] = True
                            stack.append((x, y))
        return found

    for name in ("dense", "sparse", "lrd"):
        assert components(name) == 1


def _pyramid(details, coarse_level=0):
    return CoefficientPyramid(
        coarse_level,
        np.zeros(2**coarse_level),
        tuple(np.asarray(d, dtype=float) for d in details),
    )


def test_besov_single_coefficient():
    pyr = CoefficientPyramid(2, np.zeros(4), (np.array([0.0, 1.0, 0.0, 0.0]),))
    idx = BesovIndices(s=1.0, pi=2.0, r=1.0)
    assert besov_seminorm(pyr, idx) == pytest.approx(4.0, rel=1e-14)


def test_besov_hand_sums():
    pyr = _pyramid([[3.0], [1.0, 0.0]])
    assert besov_seminorm(pyr, BesovIndices(1.0, 1.0, 1.0)) == pytest.approx(
        3.0 + math.sqrt(2.0), rel=1e-14
    )
    assert besov_seminorm(pyr, BesovIndices(1.0, 1.0, math.inf)) == pytest.approx(3.0)
    assert besov_seminorm(pyr, BesovIndices(0.5, 2.0, 2.0)) == pytest.approx(
        math.sqrt(11.0), rel=1e-14
    )


def test_besov_homogeneity_and_monotonicity():
    rng = np.random.default_rng(44)
    details = [rng.standard_normal(2**j) for j in range(5)]
    pyr = _pyramid(details)
    idx = BesovIndices(1.2, 1.5, 2.0)
    base = besov_seminorm(pyr, idx)
    doubled = besov_seminorm(_pyramid([2 * d for d in details]), idx)
    assert doubled == pytest.approx(2.0 * base, rel=1e-12)
    # zeroing any single coefficient cannot increase the seminorm
    smaller = [d.copy() for d in details]
    smaller[3][2] = 0.0
    assert besov_seminorm(_pyramid(smaller), idx) <= base


def test_besov_zero_and_validation():
    assert besov_seminorm(_pyramid([[0.0], [0.0, 0.0]]), BesovIndices(1, 1, 1)) == 0.0
    with pytest.raises(DomainError):
        BesovIndices(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        BesovIndices(1.0, 2.0, -1.0)


def test_theorem_scope_flag():
    assert BesovIndices(1.2, 1.0, 2.0).theorem_scope
    assert not BesovIndices(0.6, 1.0, 2.0).theorem_scope
    assert not BesovIndices(0.4, 4.0, 2.0).theorem_scope


def test_weak_lq_two_atoms():
    """Magnitudes 3 and 1 with unit mass each; the winner depends on q."""
    pyr = _pyramid([[3.0], [1.0, 0.0]])
    assert weak_lq_norm(pyr, 1.0, 2.0, 1.0) == pytest.approx(3.0, rel=1e-14)
    assert weak_lq_norm(pyr, 0.5, 2.0, 1.0) == pytest.approx(2.0, rel=1e-14)
    # p = 4 gives level-1 coefficients mass 2
    assert weak_lq_norm(pyr, 2.0, 4.0, 1.0) == pytest.approx(9.0, rel=1e-14)
    assert weak_lq_norm(pyr, 1.0, 4.0, 1.0) == pytest.approx(3.0, rel=1e-14)


def test_weak_lq_single_atom_formula():
    b, j, p, psi, q = 0.7, 3, 4.0, 1.2, 1.5
    details = [np.zeros(2**lv) for lv in range(j + 1)]
    details[j][5] = b
    val = weak_lq_norm(_pyramid(details), q, p, psi)
    assert val == pytest.approx(b**q * 2 ** (j * (p / 2 - 1)) * psi**p, rel=1e-14)


def test_weak_lq_equal_pair_doubles_mass():
    pyr = _pyramid([[0.0], [0.4, 0.4]])
    single = _pyramid([[0.0], [0.4, 0.0]])
    q = 0.8
    assert weak_lq_norm(pyr, q, 2.0, 1.0) == pytest.approx(
        2.0 * weak_lq_norm(single, q, 2.0, 1.0), rel=1e-14
    )


def test_weak_lq_zero_and_validation():
    assert weak_lq_norm(_pyramid([[0.0]]), 1.0, 2.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        weak_lq_norm(_pyramid([[1.0]]), 0.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        weak_lq_norm(_pyramid([[1.0]]), 1.0, -2.0, 1.0)


def test_embedding_ratio_stable_as_depth_grows():
    """Critical-decay pyramid: the ratio settles as more levels arrive.

    Coefficients 2^(-j(s + 1/2)) put every level exactly on the ball
    surface, so the sup-over-levels seminorm stays 1 while the weak
    functional converges; the ratio must flatten out rather than drift.
    """
    s, p = 1.0, 2.0
    idx = BesovIndices(s, 2.0, math.inf)
    ratios = []
    for top in range(6, 11):
        details = [np.full(2**j, 2.0 ** (-j * (s + 0.5))) for j in range(top + 1)]
        rep = embedding_check(_pyramid(details), idx, p)
        assert isinstance(rep, EmbeddingReport)
        assert rep.holds
        ratios.append(rep.ratio)
    spread = max(ratios) - min(ratios)
    assert spread < 0.05 * max(ratios)


def test_embedding_zero_pyramid():
    rep = embedding_check(_pyramid([[0.0], [0.0, 0.0]]), BesovIndices(1.0, 2.0, 1.0), 2.0)
    assert rep.ratio == 0.0
    assert rep.q == pytest.approx(2.0 / 3.0)


def test_embedding_hypothesis_errors():
    pyr = _pyramid([[1.0]])
    with pytest.raises(DomainError, match="pi > 2/"):
        embedding_check(pyr, BesovIndices(1.0, 0.5, 1.0), 2.0)
    with pytest.raises(DomainError, match="pi > p/"):
        embedding_check(pyr, BesovIndices(1.0, 1.2, 1.0), 5.0)


def test_theoretical_risk_values_and_validation():
    diag = classify_phase(1.0, 1.0, 2.0, 0.5)
    n = 1024
    assert theoretical_risk(n, diag, 2.0) == pytest.approx(
        n**-0.5 * math.log(n), rel=1e-14
    )
    with pytest.raises(DomainError):
        theoretical_risk(1, diag, 2.0)


def test_theoretical_risk_slope_approaches_dense_rate():
    diag = classify_phase(1.0, 1.0, 2.0, 1.0)
    target = -(2.0 / 2.0) * diag.gamma

    def fitted_slope(powers):
        ns = [2**k for k in powers]
        risks = [theoretical_risk(n, diag, 2.0) for n in ns]
        return float(np.polyfit(np.log(ns), np.log(risks), 1)[0])

    low = fitted_slope(range(10, 21))
    high = fitted_slope(range(30, 41))
    assert abs(high - target) < abs(low - target)
    assert abs(high - target) < 0.08
