"""
Integration tests for divergences to convex hulls: HiGHS linear programs
for commuting inputs, cvxpy cone programs and Frank-Wolfe for the quantum
ones.
"""

from __future__ import annotations

import numpy as np
import pytest

from stein_lab.divergences import (
    Hull,
    Infinity,
    d_H_classical,
    d_H_to_hull_classical,
    d_max,
    d_max_classical,
    d_max_smoothed_classical,
    d_max_smoothed_to_hull_classical,
    d_max_to_hull,
    d_max_to_hull_classical,
    dtilde_max_classical,
    dtilde_to_hull,
    dtilde_to_hull_classical,
    rel_ent_to_hull,
    rel_ent_to_hull_classical,
    relative_entropy_classical,
    umegaki,
)
from stein_lab.divergences.sdp import solve_hull_cone
from stein_lab.errors import ValidationError
from stein_lab.harness.suites import hull_segment_minimum, relative_to_set_grid, relative_to_set_nesting
from stein_lab.linalg.sampling import random_density_matrix, random_distribution
from stein_lab.verdicts import Verdict


pytestmark = [
    pytest.mark.integration,
    pytest.mark.domain,
]


def test_single_generator_hull_equals_pairwise_values():
    p, q = np.array([0.6, 0.3, 0.1]), np.array([0.3, 0.3, 0.4])
    assert d_max_to_hull_classical(p, [q]).as_float() == pytest.approx(max(0.0, d_max_classical(p, q)), abs=1e-8)
    assert dtilde_to_hull_classical(p, [q], 0.1).as_float() == pytest.approx(
        dtilde_max_classical(p, q, 0.1).as_float(), abs=1e-6
    )
    assert d_H_to_hull_classical(p, [q], 0.2).as_float() == pytest.approx(d_H_classical(p, q, 0.2).as_float(), abs=1e-6)


def test_hull_is_below_every_generator():
    """
    Invariant:
    min over the hull never exceeds the value at any generator.
    """
    rng = np.random.default_rng(41)
    p = random_distribution(4, rng)
    gens = [random_distribution(4, rng) for _ in range(3)]
    hull_max = d_max_to_hull_classical(p, gens)
    hull_rel = rel_ent_to_hull_classical(p, gens)
    hull_smooth = d_max_smoothed_to_hull_classical(p, gens, 0.1)
    for q in gens:
        assert hull_max.lower <= d_max_classical(p, q) + 1e-8
        assert hull_rel.lower <= relative_entropy_classical(p, q) + 1e-8
        assert hull_smooth.lower <= d_max_smoothed_classical(p, q, 0.1).upper + 1e-8


def test_member_of_hull_has_zero_d_max():
    gens = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    assert d_max_to_hull_classical([0.3, 0.7], gens).as_float() == pytest.approx(0.0, abs=1e-9)


def test_unreachable_label_is_infinite():
    assert d_max_to_hull_classical([0.5, 0.5], [np.array([1.0, 0.0])]).value is Infinity.POSITIVE


def test_hull_requires_generators():
    with pytest.raises(ValidationError):
        d_max_to_hull_classical([0.5, 0.5], [])
    with pytest.raises(ValidationError):
        Hull.of([])


def test_quantum_hull_agrees_with_classical_on_diagonals():
    rng = np.random.default_rng(43)
    p = random_distribution(3, rng)
    gens = [random_distribution(3, rng) for _ in range(3)]
    quantum = d_max_to_hull(np.diag(p), [np.diag(q) for q in gens])
    classical = d_max_to_hull_classical(p, gens)
    assert quantum.lower <= classical.upper + 1e-6
    assert classical.lower <= quantum.upper + 1e-6


def test_quantum_hull_bounds():
    """
    Invariant:
    D(rho||F) <= D_max(rho||F) <= D_max(rho||sigma_i) for every generator.
    """
    rng = np.random.default_rng(47)
    rho = random_density_matrix(3, rng)
    gens = [random_density_matrix(3, rng) for _ in range(3)]
    max_hull = d_max_to_hull(rho, gens)
    rel_hull = rel_ent_to_hull(rho, gens)
    assert rel_hull.lower <= max_hull.upper + 1e-6
    for sigma in gens:
        assert max_hull.lower <= d_max(rho, sigma) + 1e-6
        assert rel_hull.lower <= umegaki(rho, sigma) + 1e-6


def test_dtilde_hull_below_d_max_hull():
    rng = np.random.default_rng(53)
    rho = random_density_matrix(2, rng)
    gens = [random_density_matrix(2, rng) for _ in range(2)]
    assert dtilde_to_hull(rho, gens, 0.1).lower <= d_max_to_hull(rho, gens).upper + 1e-6


def test_cone_brackets_are_tight():
    """
    Invariant:
    the cone program's dual bound and the exact value at its weights agree
    to well inside the certificate tolerance.
    """
    rng = np.random.default_rng(59)
    for dim, count in [(2, 2), (2, 3), (4, 3)]:
        rho = random_density_matrix(dim, rng)
        gens = [random_density_matrix(dim, rng) for _ in range(count)]
        max_hull = d_max_to_hull(rho, gens)
        tilde_hull = dtilde_to_hull(rho, gens, 0.1)
        assert max_hull.upper - max_hull.lower <= 1e-6, max_hull.certificate
        assert tilde_hull.upper - tilde_hull.lower <= 1e-6, tilde_hull.certificate
        assert tilde_hull.lower <= max_hull.upper + 1e-9


def test_cone_matches_linear_program_on_diagonals():
    rng = np.random.default_rng(61)
    for _ in range(5):
        p = random_distribution(3, rng)
        gens = [random_distribution(3, rng) for _ in range(3)]
        quantum = d_max_to_hull(np.diag(p), [np.diag(q) for q in gens])
        classical = d_max_to_hull_classical(p, gens)
        assert quantum.as_float() == pytest.approx(classical.as_float(), abs=1e-6)
        smoothed = dtilde_to_hull(np.diag(p), [np.diag(q) for q in gens], 0.2)
        assert smoothed.as_float() == pytest.approx(dtilde_to_hull_classical(p, gens, 0.2).as_float(), abs=1e-6)


def test_quantum_member_of_hull_has_zero_d_max():
    plus = np.full((2, 2), 0.5)
    zero = np.diag([1.0, 0.0])
    rho = 0.4 * zero + 0.6 * plus
    result = d_max_to_hull(rho, [zero, plus])
    assert result.as_float() == pytest.approx(0.0, abs=1e-6)
    assert result.witness["weights"] == pytest.approx([0.4, 0.6], abs=1e-4)


def test_relative_entropy_to_nested_hulls_is_nonincreasing():
    """
    Invariant:
    adding generators can only lower D(rho||hull).
    """
    rng = np.random.default_rng(67)
    rho = random_density_matrix(3, rng)
    gens = [random_density_matrix(3, rng) for _ in range(4)]
    values = [rel_ent_to_hull(rho, gens[:m]) for m in range(1, 5)]
    for larger, smaller in zip(values[1:], values[:-1]):
        assert larger.lower <= smaller.upper + 2e-6
    assert relative_to_set_nesting(np.random.default_rng(68), 5).verdict is Verdict.PASS


def test_relative_entropy_to_hull_against_grid():
    """
    diag(3/4, 1/4) lies in the hull of |0><0| and |1><1|, so its relative
    entropy to that hull vanishes; against |0><0| and |+><+| the value
    matches a uniform grid over the segment.
    """
    zero, one = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    plus = np.full((2, 2), 0.5)
    rho = np.diag([0.75, 0.25])
    assert rel_ent_to_hull(rho, [zero, one]).as_float() == pytest.approx(0.0, abs=1e-6)
    assert hull_segment_minimum(rho, zero, one) == pytest.approx(0.0, abs=1e-12)

    on_grid = hull_segment_minimum(rho, zero, plus)
    assert on_grid > 0.0
    assert rel_ent_to_hull(rho, [zero, plus]).as_float() == pytest.approx(on_grid, abs=1e-6)

    record = relative_to_set_grid(np.random.default_rng(71), 2)
    assert record.verdict is Verdict.PASS, record.to_dict()


def test_cone_solution_certifies_lower_bound():
    rng = np.random.default_rng(73)
    rho = random_density_matrix(2, rng)
    stack = np.stack([random_density_matrix(2, rng) for _ in range(3)])
    solution = solve_hull_cone(rho, stack)
    assert solution.solved
    assert solution.weights.sum() == pytest.approx(1.0)
    assert 1.0 <= solution.dual_bound <= solution.primal + 1e-6


def test_cone_solver_failure_keeps_trivial_bracket():
    rng = np.random.default_rng(79)
    rho = random_density_matrix(2, rng)
    stack = np.stack([random_density_matrix(2, rng) for _ in range(2)])
    solution = solve_hull_cone(rho, stack, 0.1, solver="NOT_A_SOLVER")
    assert not solution.solved
    assert solution.dual_bound == pytest.approx(0.9)
    assert solution.weights == pytest.approx([0.5, 0.5])
