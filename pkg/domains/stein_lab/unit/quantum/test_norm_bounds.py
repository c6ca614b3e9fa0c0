"""
Unit tests for the d_r decay bound, tail filtering and the output-norm
bound of the blurring map.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from stein_lab.errors import ValidationError
from stein_lab.harness.suites import output_norm_batch, tail_filtering_batch
from stein_lab.quantum import (
    SymTypeOperator,
    check_d_r_bound,
    check_output_norm,
    check_tail_filtering,
    d_r_bound_sweep,
    low_block_mask,
    max_excitation,
    output_norm_factor,
    random_deficient_operator,
    random_tail_filtering_instance,
)
from stein_lab.typeclasses import enumerate_types
from stein_lab.verdicts import Verdict


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def test_max_excitation():
    assert list(max_excitation(2, 2)) == [0, 1, 2]
    assert list(max_excitation(3, 1)) == [0]
    assert list(low_block_mask(2, 2, 1)) == [True, True, False]


def test_d_r_sweep_never_fails():
    records = d_r_bound_sweep(12)
    assert records
    assert all(r.verdict is not Verdict.FAIL for r in records)


def test_d_r_bound_outside_window_is_inapplicable():
    assert check_d_r_bound(10, 1, 2, eta=0.3).verdict is Verdict.INAPPLICABLE


def test_d_r_bound_with_threshold():
    record = check_d_r_bound(12, 6, 2, eta=0.25, N=4)
    assert record.verdict is Verdict.PASS
    assert record.terms["types_checked"] == 9


def test_tail_filtering_on_random_instances():
    rng = np.random.default_rng(8)
    for _ in range(100):
        t, v, z = random_tail_filtering_instance(6, 2, 0.6, rng)
        record = check_tail_filtering(t, v, z)
        assert record.verdict is Verdict.PASS, record.to_dict()
        assert record.terms["mu"] <= 0.6 + 1e-9


def test_tail_filtering_hypothesis_violation():
    rng = np.random.default_rng(9)
    t, v, z = random_tail_filtering_instance(5, 2, 0.5, rng)
    record = check_tail_filtering(2.0 * t, v, z)
    assert record.verdict is Verdict.INAPPLICABLE
    assert "norm_one" in record.detail


def test_tail_filtering_instance_arguments():
    with pytest.raises(ValidationError):
        random_tail_filtering_instance(4, 4, 0.5, np.random.default_rng(0))


def test_output_norm_factor():
    assert output_norm_factor(18, 16, 1.0) == pytest.approx(2.0 * (math.exp(-1.0) + math.sqrt(3.0) * math.exp(-1.0)))


def test_output_norm_bound_holds():
    rng = np.random.default_rng(10)
    for n, N in [(8, 2), (12, 3), (16, 4)]:
        x = random_deficient_operator(n, 2, N, rng)
        assert check_output_norm(n, N, 0.5, x).verdict is not Verdict.FAIL


def test_output_norm_requires_vanishing_low_block():
    x = SymTypeOperator(6, 2, np.eye(len(enumerate_types(6, 2))))
    assert check_output_norm(6, 2, 0.5, x).verdict is Verdict.INAPPLICABLE


@pytest.mark.slow
@pytest.mark.exhaustive
def test_d_r_sweep_exhaustive():
    records = d_r_bound_sweep(20)
    assert len(records) == sum(n - 1 for n in range(2, 21))
    assert all(r.verdict is not Verdict.FAIL for r in records)


def test_tail_filtering_suite_runs_one_hundred_triples():
    record = tail_filtering_batch(np.random.default_rng(12))
    assert record.verdict is Verdict.PASS, record.to_dict()
    assert record.terms["instances"] == 100


def test_output_norm_suite_small_n():
    record = output_norm_batch(np.random.default_rng(13), n_max=8)
    assert record.verdict is Verdict.PASS, record.to_dict()
    assert record.terms["instances"] == sum((n // 2) * (n - 1) for n in range(2, 9))


@pytest.mark.slow
@pytest.mark.exhaustive
def test_output_norm_exhaustive_up_to_20():
    """
    Invariant:
    every n <= 20, threshold N < n and delta = j/n <= 1/2 obeys the output-norm bound.
    """
    record = output_norm_batch(np.random.default_rng(14), n_max=20)
    assert record.verdict is Verdict.PASS, record.to_dict()
    assert record.terms["instances"] == sum((n // 2) * (n - 1) for n in range(2, 21))
