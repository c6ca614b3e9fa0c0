"""
Unit tests for hypergeometric pmfs, their exact oracles, tail bounds and
the bosonic-entropy lower bound.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from stein_lab.errors import PreconditionError, ValidationError
from stein_lab.hypergeometric import (
    bosonic_entropy,
    hyp_lower_bound,
    hyp_pmf,
    hyp_pmf_exact,
    hyp_pmf_vector,
    log_comb,
    multivariate_pmf,
    multivariate_pmf_exact,
    multivariate_pmf_ratio,
    multivariate_pmf_table,
    tail_bounds,
    tail_mass,
)
from stein_lab.harness.suites import hypergeometric_lower_bound
from stein_lab.typeclasses import TypeVector, count_matrix, enumerate_types, leq_elementwise
from stein_lab.verdicts import Verdict


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def test_log_comb_vanishing_binomial():
    assert log_comb(3, 4) == -math.inf
    assert log_comb(5, 2) == pytest.approx(math.log(10))


def test_pmf_matches_exact_fraction():
    N, K, n = 20, 7, 9
    for k in range(n + 1):
        assert hyp_pmf(N, K, n, k) == pytest.approx(float(hyp_pmf_exact(N, K, n, k)), rel=1e-10, abs=1e-300)


def test_pmf_vector_sums_to_one():
    assert hyp_pmf_vector(30, 11, 12).sum() == pytest.approx(1.0)


def test_duality_exchanging_draws_and_successes():
    """
    Invariant:
    Hyp(N, K, n) at k equals Hyp(N, n, K) at k.
    """
    for N in range(1, 15):
        for K in range(N + 1):
            for n in range(N + 1):
                for k in range(min(K, n) + 1):
                    assert hyp_pmf_exact(N, K, n, k) == hyp_pmf_exact(N, n, K, k)


def test_invalid_urn():
    with pytest.raises(ValidationError):
        hyp_pmf(5, 6, 2, 1)


def test_tail_bounds_hold():
    for N in (20, 40):
        for n in range(1, N):
            for K in range(N + 1):
                for u in (0.1, 0.2, 0.3):
                    basic, tight = tail_bounds(N, K, n, u)
                    mass = tail_mass(N, K, n, u)
                    assert mass <= basic + 1e-12
                    if 2 * n >= N:
                        assert mass <= tight + 1e-12


def test_tight_bound_vanishes_for_full_draw():
    assert tail_bounds(10, 3, 10, 0.1)[1] == 0.0


def test_multivariate_pmf_three_ways():
    N, n = 8, 4
    for s in enumerate_types(N, 3):
        for t in enumerate_types(n, 3):
            exact = float(multivariate_pmf_exact(N, s, n, t))
            assert multivariate_pmf(N, s, n, t) == pytest.approx(exact, abs=1e-14)
            assert multivariate_pmf_ratio(N, s, n, t) == pytest.approx(exact, abs=1e-14)


def test_multivariate_table_matches_scalar():
    N, n = 6, 3
    table = multivariate_pmf_table(N, count_matrix(N, 2), n, count_matrix(n, 2))
    for j, s in enumerate(enumerate_types(N, 2)):
        for i, t in enumerate(enumerate_types(n, 2)):
            assert table[i, j] == pytest.approx(multivariate_pmf(N, s, n, t), abs=1e-14)
    assert np.allclose(table.sum(axis=0), 1.0)


def test_bosonic_entropy_values():
    assert bosonic_entropy(0.0) == 0.0
    assert bosonic_entropy(1.0) == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        bosonic_entropy(-0.5)


def test_lower_bound_on_dominated_types():
    """
    Invariant:
    2^{-n g(N/n - 1)} <= pmf whenever n t is dominated by N s.
    """
    for N in range(1, 11):
        for n in range(1, N + 1):
            for s in enumerate_types(N, 2):
                for t in enumerate_types(n, 2):
                    if leq_elementwise(t, s):
                        assert hyp_lower_bound(N, s, n, t) <= multivariate_pmf(N, s, n, t) * (1 + 1e-10)


def test_lower_bound_requires_domination():
    with pytest.raises(PreconditionError):
        hyp_lower_bound(4, TypeVector.of([4, 0]), 2, TypeVector.of([1, 1]))


@pytest.mark.slow
@pytest.mark.exhaustive
def test_lower_bound_exhaustive_three_symbols():
    for N in range(1, 13):
        for n in range(1, N + 1):
            for s in enumerate_types(N, 3):
                for t in enumerate_types(n, 3):
                    if leq_elementwise(t, s):
                        exact = multivariate_pmf_exact(N, s, n, t)
                        assert Fraction(hyp_lower_bound(N, s, n, t)) <= exact * Fraction(1 + 1e-10)


def test_lower_bound_suite_small_grid():
    record = hypergeometric_lower_bound(N_max=8, alphabet_max=3)
    assert record.verdict is Verdict.PASS, record.to_dict()
    assert record.terms["pairs"] > 0


@pytest.mark.slow
@pytest.mark.exhaustive
def test_lower_bound_exhaustive_up_to_24():
    """
    Invariant:
    every dominated pair with N <= 24 and |X| <= 3 satisfies the bound.
    """
    record = hypergeometric_lower_bound(N_max=24, alphabet_max=3)
    assert record.verdict is Verdict.PASS, record.to_dict()
