"""
Aggregate integration tests: seeded fan-out and the runner.

A run is reproducible from (experiment, seed, tolerances, params);
runtime_s is the only field allowed to differ between two runs.
"""

from __future__ import annotations

import functools

import pytest

from stein_lab.classical import blurring_campaign_trial, gsl_campaign_trial
from stein_lab.errors import ConfigError
from stein_lab.harness import ExperimentConfig, run
from stein_lab.harness.pool import fan_out, spawn_seeds
from stein_lab.verdicts import Verdict


# ============================================================
# MARKERS
# ============================================================

pytestmark = [
    pytest.mark.integration,
    pytest.mark.aggregate,
]

FOCK_SMALL = {"n_grid": [10, 20, 40], "threshold": 2.0}


def _stable(records):
    return [(r.name, r.verdict, r.lhs, r.rhs) for r in records]


# ============================================================
# FAN-OUT
# ============================================================

def test_seeds_are_prefix_stable():
    assert [s.entropy for s in spawn_seeds(9, 3)] == [s.entropy for s in spawn_seeds(9, 5)[:3]]
    assert [s.spawn_key for s in spawn_seeds(9, 3)] == [s.spawn_key for s in spawn_seeds(9, 5)[:3]]


def test_records_do_not_depend_on_worker_count():
    """
    Invariant:
    trial i always draws from child i of the root seed.
    """
    trial = functools.partial(blurring_campaign_trial, max_n=10, max_alphabet=2)
    serial = fan_out(trial, 5, 4, jobs=1)
    parallel = fan_out(trial, 5, 4, jobs=2)
    assert _stable(serial) == _stable(parallel)
    assert [r.name for r in serial] == [f"classical_blurring_lemma[{i}]" for i in range(4)]


def test_different_seeds_give_different_instances():
    trial = functools.partial(gsl_campaign_trial, max_n=6, max_alphabet=2)
    assert _stable(fan_out(trial, 1, 3)) != _stable(fan_out(trial, 2, 3))


# ============================================================
# RUNNER
# ============================================================

def test_run_is_reproducible():
    config = ExperimentConfig("fock-convergence", seed=3, params=FOCK_SMALL)
    first, second = run(config), run(config)
    assert _stable(first.checks) == _stable(second.checks)
    assert first.environment == second.environment
    assert first.exit_code == 0


def test_failed_checks_carry_a_reproduce_command():
    config = ExperimentConfig("fock-convergence", seed=3, params={"n_grid": [10, 20, 40], "threshold": 0.0})
    report = run(config)
    assert report.failed
    for record in report.checks:
        if record.verdict is Verdict.FAIL:
            assert record.reproduce.startswith("stein-lab fock-convergence --seed 3 --tol ")
            assert "threshold=0.0" in record.reproduce
        else:
            assert record.reproduce is None


def test_tables_follow_the_grid():
    report = run(ExperimentConfig("fock-convergence", params=FOCK_SMALL))
    assert [row["n"] for row in report.tables["convergence"]] == [10, 20, 40]


def test_invalid_config_raises_before_running():
    with pytest.raises(ConfigError, match="params.delta"):
        run(ExperimentConfig("fock-convergence", params={"delta": 0.9}))
