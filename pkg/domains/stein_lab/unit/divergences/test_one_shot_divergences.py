"""
Unit tests for D, D_max, D_H^eps and the smoothed max-divergences on
single pairs.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from stein_lab.divergences import (
    ClassicalDistribution,
    DivergenceResult,
    Infinity,
    d_H,
    d_H_classical,
    d_max,
    d_max_classical,
    d_max_smoothed_classical,
    dtilde_max,
    dtilde_max_classical,
    relative_entropy_classical,
    umegaki,
)
from stein_lab.errors import ValidationError
from stein_lab.harness.suites import d_H_data_processing, d_max_triangle, dtilde_triangle
from stein_lab.linalg import symmetrize, trace_out_last
from stein_lab.linalg.sampling import random_density_matrix, random_distribution
from stein_lab.verdicts import Verdict


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


# ---------------------------------------------------------------------
# RELATIVE AND MAX-RELATIVE ENTROPY
# ---------------------------------------------------------------------

def test_relative_entropy_of_known_pair():
    p, q = np.array([0.5, 0.5]), np.array([0.25, 0.75])
    expected = 0.5 * math.log2(2.0) + 0.5 * math.log2(0.5 / 0.75)
    assert relative_entropy_classical(p, q) == pytest.approx(expected)
    assert umegaki(np.diag(p), np.diag(q)) == pytest.approx(expected)


def test_support_violation_is_infinite():
    assert d_max_classical([0.5, 0.5], [1.0, 0.0]) is Infinity.POSITIVE
    assert umegaki(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])) is Infinity.POSITIVE


def test_d_max_of_diagonal_pair():
    assert d_max(np.diag([0.5, 0.5]), np.diag([0.25, 0.75])) == pytest.approx(1.0)
    assert d_max_classical([0.5, 0.5], [0.25, 0.75]) == pytest.approx(1.0)


def test_relative_below_max():
    """
    Invariant:
    D(rho||sigma) <= D_max(rho||sigma).
    """
    rng = np.random.default_rng(31)
    for _ in range(25):
        rho, sigma = random_density_matrix(3, rng), random_density_matrix(3, rng)
        assert umegaki(rho, sigma) <= d_max(rho, sigma) + 1e-9


def test_divergences_of_equal_states_vanish():
    rho = random_density_matrix(3, np.random.default_rng(2))
    assert umegaki(rho, rho) == pytest.approx(0.0, abs=1e-9)
    assert d_max(rho, rho) == pytest.approx(0.0, abs=1e-9)


# ---------------------------------------------------------------------
# HYPOTHESIS TESTING
# ---------------------------------------------------------------------

def test_d_H_classical_greedy_value():
    """
    p = (0.5, 0.5), q = (0.1, 0.9), eps = 0.5: the optimal test accepts
    label 0 only, beta = 0.1.
    """
    result = d_H_classical([0.5, 0.5], [0.1, 0.9], 0.5)
    assert result.as_float() == pytest.approx(-math.log2(0.1))
    assert result.certificate["duality_gap"] == pytest.approx(0.0, abs=1e-12)


def test_d_H_quantum_agrees_with_classical_on_diagonals():
    rng = np.random.default_rng(5)
    for _ in range(10):
        p, q = random_distribution(4, rng), random_distribution(4, rng)
        quantum = d_H(np.diag(p), np.diag(q), 0.2)
        classical = d_H_classical(p, q, 0.2)
        assert quantum.as_float() == pytest.approx(classical.as_float(), abs=1e-6)


def test_d_H_bracket_contains_value():
    rho, sigma = random_density_matrix(3, np.random.default_rng(9)), random_density_matrix(3, np.random.default_rng(10))
    result = d_H(rho, sigma, 0.1)
    assert result.lower <= result.as_float() + 1e-12
    assert result.as_float() <= result.upper + 1e-12


def test_d_H_rejects_eps_outside_unit_interval():
    with pytest.raises(ValidationError):
        d_H_classical([0.5, 0.5], [0.5, 0.5], 1.0)


def test_d_H_dispatches_classical_distributions():
    p, q = ClassicalDistribution.normalized([1, 1]), ClassicalDistribution.normalized([1, 3])
    assert d_H(p, q, 0.3).as_float() == pytest.approx(d_H_classical(p, q, 0.3).as_float())


# ---------------------------------------------------------------------
# SMOOTHING
# ---------------------------------------------------------------------

def test_eps_zero_is_d_max():
    p, q = [0.7, 0.3], [0.5, 0.5]
    assert dtilde_max_classical(p, q, 0.0).as_float() == pytest.approx(d_max_classical(p, q))


def test_dtilde_quantum_matches_classical_on_diagonals():
    p, q = np.array([0.6, 0.3, 0.1]), np.array([0.2, 0.3, 0.5])
    assert dtilde_max(np.diag(p), np.diag(q), 0.1).as_float() == pytest.approx(
        dtilde_max_classical(p, q, 0.1).as_float(), abs=1e-6
    )


def test_smoothed_witness_lies_in_ball_and_under_cap():
    p, q = np.array([0.7, 0.2, 0.1]), np.array([0.2, 0.4, 0.4])
    result = d_max_smoothed_classical(p, q, 0.2)
    smoothed = result.witness["smoothed"]
    assert smoothed.sum() == pytest.approx(1.0)
    assert 0.5 * np.abs(smoothed - p).sum() <= 0.2 + 1e-9
    assert result.certificate["cap_residual"] <= 1e-9
    assert d_max_classical(smoothed, q) <= result.upper + 1e-9


def test_smoothed_optimum_is_symmetric_and_matches_grid_search():
    """
    Invariant:
    for a permutation-invariant pair the smoothed witness is symmetric and no
    p' in the ball, symmetric or not, beats it.
    """
    # two-letter sequences 00, 01, 10, 11 of i.i.d. sources
    p = np.array([0.49, 0.21, 0.21, 0.09])
    q = np.array([0.16, 0.24, 0.24, 0.36])
    eps = 0.1
    result = d_max_smoothed_classical(p, q, eps)
    smoothed = result.witness["smoothed"]
    assert smoothed[1] == pytest.approx(smoothed[2], abs=1e-12)

    steps = 100
    a, b, c = np.meshgrid(*(np.arange(steps + 1),) * 3, indexing="ij")
    d = steps - a - b - c
    keep = d >= 0
    grid = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=1) / steps
    inside = 0.5 * np.abs(grid - p).sum(axis=1) <= eps + 1e-12
    best = float(np.log2(np.max(grid[inside] / q, axis=1)).min())

    assert result.lower <= best + 1e-8
    assert best <= result.upper + 0.1


def test_smoothing_sandwich():
    """
    Invariant:
    Dtilde^eps <= D_max^eps <= Dtilde^eps + log 1/(1 - eps), trace-distance ball.
    """
    rng = np.random.default_rng(17)
    for _ in range(30):
        p, q = random_distribution(4, rng), random_distribution(4, rng)
        for eps in (0.05, 0.2, 0.4):
            tilde = dtilde_max_classical(p, q, eps)
            smooth = d_max_smoothed_classical(p, q, eps)
            assert tilde.lower <= smooth.upper + 1e-8
            assert smooth.lower <= tilde.upper + math.log2(1.0 / (1.0 - eps)) + 1e-8


def test_weak_converse_duality():
    """
    Invariant:
    D_H^{1-eps-eta} + log eta <= D_max^eps <= D_H^{1-eps}.
    """
    rng = np.random.default_rng(23)
    eps, eta = 0.2, 0.1
    for _ in range(30):
        p, q = random_distribution(3, rng), random_distribution(3, rng)
        smooth = d_max_smoothed_classical(p, q, eps)
        assert smooth.lower <= d_H_classical(p, q, 1.0 - eps).upper + 1e-8
        assert d_H_classical(p, q, 1.0 - eps - eta).lower + math.log2(eta) <= smooth.upper + 1e-8


def test_d_max_triangle_on_classical_triples():
    """
    Invariant:
    D_max(p||r) <= D_max(p||q) + D_max(q||r).
    """
    rng = np.random.default_rng(41)
    for _ in range(50):
        k = int(rng.integers(2, 6))
        p, q, r = (random_distribution(k, rng) for _ in range(3))
        assert d_max_classical(p, r) <= d_max_classical(p, q) + d_max_classical(q, r) + 1e-9
    assert d_max_triangle(np.random.default_rng(42), 50).verdict is Verdict.PASS


def test_dtilde_triangle_on_quantum_triples():
    """
    Invariant:
    Dtilde^eps(rho||sigma) <= Dtilde^eps(rho||omega) + D_max(omega||sigma).
    """
    rng = np.random.default_rng(43)
    for _ in range(10):
        rho, omega, sigma = (random_density_matrix(3, rng) for _ in range(3))
        direct = dtilde_max(rho, sigma, 0.15)
        via = dtilde_max(rho, omega, 0.15)
        assert direct.lower <= via.upper + d_max(omega, sigma) + 1e-8
    record = dtilde_triangle(np.random.default_rng(44), 10)
    assert record.verdict is Verdict.PASS, record.to_dict()


def test_d_H_data_processing_under_partial_trace_and_symmetrisation():
    rng = np.random.default_rng(45)
    for _ in range(10):
        rho, sigma = random_density_matrix(4, rng), random_density_matrix(4, rng)
        before = d_H(rho, sigma, 0.2)
        for after in (
            d_H(trace_out_last(rho, 2, 2, 1), trace_out_last(sigma, 2, 2, 1), 0.2),
            d_H(symmetrize(rho, 2, 2), symmetrize(sigma, 2, 2), 0.2),
        ):
            assert after.lower <= before.upper + 1e-8
    record = d_H_data_processing(np.random.default_rng(46), 10)
    assert record.verdict is Verdict.PASS, record.to_dict()


# ---------------------------------------------------------------------
# RESULT CARRIERS
# ---------------------------------------------------------------------

def test_distribution_validation():
    with pytest.raises(ValidationError):
        ClassicalDistribution(np.array([0.5, 0.6]))
    assert ClassicalDistribution(np.array([0.2, 0.3]), subnormalized=True).size == 2


def test_result_serialization():
    result = DivergenceResult(Infinity.POSITIVE)
    assert result.infinite
    assert result.to_dict()["value"] == "+inf"
    bracketed = DivergenceResult(1.0, bracket=(0.5, 1.0))
    assert bracketed.to_dict()["bracket"] == [0.5, 1.0]
