"""
Unit tests for experiment parameter validation.

Diagnostics name the dotted config path and, for module preconditions,
repeat the wording the module itself raises.
"""

from __future__ import annotations

import pytest

from stein_lab.errors import ConfigError
from stein_lab.harness import Diagnostic, get_experiment
from stein_lab.harness.params import (
    ascending_ints,
    distribution,
    distributions,
    half_interval,
    integer,
    nonnegative_grid,
    optional,
)


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


# ============================================================
# SINGLE VALIDATORS
# ============================================================

@pytest.mark.parametrize("value", [0.0, 0.9, -0.1, "0.2", float("nan")])
def test_half_interval_rejects(value):
    assert half_interval("delta")(value) == "delta must be in (0, 1/2]"


@pytest.mark.parametrize("value", [0.5, 0.01, 1e-6])
def test_half_interval_accepts(value):
    assert half_interval("delta")(value) is None


def test_integer_rejects_bools_and_bounds():
    check = integer(1, 10)
    assert check(True) is not None
    assert check(0) == "must be at least 1"
    assert check(11) == "must be at most 10"
    assert check(5) is None


def test_ascending_grid():
    check = ascending_ints(1)
    assert check([2, 4, 8]) is None
    assert check([4, 4]) == "must be strictly ascending"
    assert check([0, 1]) == "entries must be at least 1"
    assert check([]) is not None


def test_distribution_checks():
    assert distribution([0.5, 0.5]) is None
    assert distribution([0.5, 0.6]) == "probabilities must sum to 1"
    assert distribution([1.2, -0.2]) == "probabilities must be nonnegative"
    assert distributions([[0.5, 0.5], [0.2, 0.3, 0.5]]) == "distributions have different lengths"
    assert distributions([[0.5, 0.5], [0.2, 0.7]]).startswith("[1]")


def test_grid_and_optional():
    assert nonnegative_grid([0.0, 1e8]) is None
    assert nonnegative_grid([-1.0]) == "entries must be nonnegative"
    assert optional(integer(1))(None) is None


# ============================================================
# EXPERIMENT PARAMETERS
# ============================================================

def test_delta_out_of_range():
    """
    Invariant:
    delta = 0.9 is reported at params.delta with the module's own wording.
    """
    diagnostics = get_experiment("fock-convergence").check_params({"delta": 0.9})
    assert diagnostics == [Diagnostic("params.delta", "delta must be in (0, 1/2]")]


def test_unknown_parameter_is_reported():
    diagnostics = get_experiment("axioms").check_params({"sep_sample": 20})
    assert [d.path for d in diagnostics] == ["params.sep_sample"]


def test_cross_checks_run_after_single_checks():
    spec = get_experiment("fock-convergence")
    assert spec.check_params({"h": [1], "k": [1, 0]}) == [
        Diagnostic("params.k", "h and k must have the same number of modes")
    ]
    assert [d.path for d in spec.check_params({"h": [3], "k": [3], "n_grid": [2, 4]})] == ["params.n_grid"]
    assert [d.path for d in spec.check_params({"h": [2], "cutoff": 1})] == ["params.cutoff"]


def test_stein_estimate_cross_checks():
    spec = get_experiment("stein-estimate")
    assert [d.path for d in spec.check_params({"eps": 0.6, "eta": 0.5})] == ["params.eta"]
    assert [d.path for d in spec.check_params({"generators": [[0.2, 0.3, 0.5]]})] == ["params.generators"]


def test_chain_size_is_capped():
    diagnostics = get_experiment("quantum-blurring").check_params({"chain_n": [1, 4]})
    assert diagnostics == [Diagnostic("params.chain_n", "entries must be at most 3")]


def test_rank_above_fock_dimension():
    diagnostics = get_experiment("vacuum-support").check_params({"rank": 20})
    assert [d.path for d in diagnostics] == ["params.rank"]


def test_defaults_are_valid():
    for experiment in ("check-lemmas", "classical-lemma", "classical-stein", "quantum-blurring",
                       "fock-convergence", "vacuum-support", "axioms", "stein-estimate"):
        assert get_experiment(experiment).check_params() == []


def test_unknown_experiment():
    with pytest.raises(ConfigError, match="unknown experiment"):
        get_experiment("quantum-stein")
