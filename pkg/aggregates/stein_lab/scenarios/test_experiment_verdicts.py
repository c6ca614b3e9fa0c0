"""
Scenario tests: every experiment at reduced size reaches its expected
verdicts with no FAIL.
"""

from __future__ import annotations

import pytest

from stein_lab.harness import ExperimentConfig, run
from stein_lab.verdicts import Verdict


pytestmark = [
    pytest.mark.scenario,
    pytest.mark.aggregate,
]


def _run(experiment: str, seed: int = 0, **params):
    return run(ExperimentConfig(experiment, seed=seed, params=params))


def _by_name(report):
    return {record.name: record for record in report.checks}


def test_axioms_scenario():
    report = _run("axioms", product_max_level=2)
    records = _by_name(report)
    assert report.exit_code == 0
    assert all(records[f"axiom[product:A{i}]"].verdict is Verdict.PASS for i in range(1, 6))
    assert records["axiom[sep:A3]"].verdict is Verdict.INAPPLICABLE
    assert records["axiom[sep:A4]"].verdict is Verdict.INAPPLICABLE
    assert all(records[f"axiom_broken[A{i}]"].verdict is Verdict.PASS for i in range(2, 6))
    assert [row["family"] for row in report.tables["axioms"]][:2] == ["product", "sep"]


def test_classical_lemma_scenario():
    report = _run("classical-lemma", seed=11, trials=10, max_n=12, max_alphabet=2)
    assert report.exit_code == 0
    assert len(report.checks) == 10


def test_classical_stein_scenario():
    report = _run("classical-stein", seed=2, trials=5, max_n=6, max_inconclusive_rate=1.0)
    assert report.exit_code == 0
    assert report.checks[-1].name == "classical_gsl_inconclusive_rate"


def test_stein_estimate_scenario():
    report = _run("stein-estimate", n_grid=[2, 4])
    assert report.exit_code == 0
    assert sorted(_by_name(report)) == [
        "stein_duality_lower[n=2]",
        "stein_duality_lower[n=4]",
        "stein_duality_upper[n=2]",
        "stein_duality_upper[n=4]",
    ]
    assert len(report.tables["stein_estimate"]) == 2


def test_fock_convergence_scenario():
    report = _run("fock-convergence", n_grid=[10, 20, 40], threshold=2.0)
    records = _by_name(report)
    assert report.exit_code == 0
    assert records["fock_convergence_decreasing"].verdict is Verdict.PASS
    assert records["fock_limit_two_paths"].verdict is Verdict.PASS
    assert records["pure_loss_kraus_completeness"].verdict is Verdict.PASS


def test_vacuum_support_scenario():
    report = _run("vacuum-support", seed=4, states=2, cutoff=4, quad_nodes=8)
    names = [record.name for record in report.checks]
    assert report.exit_code == 0
    assert "vacuum_in_support[0]" in names and "vacuum_in_support[1]" in names
    assert names.count("coherent_floor[composite]") == 1
    assert len(report.tables["vacuum_support"]) == 2


@pytest.mark.slow
def test_quantum_blurring_scenario():
    report = _run(
        "quantum-blurring",
        seed=6,
        kraus_n_max=3,
        kraus_dims=[2],
        kraus_per_config=1,
        d_r_n_max=8,
        tail_instances=3,
        oracle_n_max=2,
        oracle_deltas=[0.5],
        chain_n=[1, 2],
        proxy_n=[2, 4],
    )
    assert report.exit_code == 0
    assert any(record.name.startswith("chain_main") for record in report.checks)
    assert {row["n"] for row in report.tables["blurring_proxy"]} == {2, 4}


@pytest.mark.slow
def test_check_lemmas_scenario():
    report = _run(
        "check-lemmas",
        instances=5,
        hyp_N_max=10,
        lower_bound_N_max=5,
        kraus_n_max=2,
        d_r_n_max=6,
        tail_instances=5,
        output_norm_n_max=6,
    )
    records = _by_name(report)
    assert report.exit_code == 0
    assert len(report.checks) == 24
    for name in ("d_max_triangle", "dtilde_triangle", "d_H_data_processing", "relative_to_set_nesting",
                 "relative_to_set_grid", "asymptotic_continuity"):
        assert records[name].verdict is Verdict.PASS, records[name].to_dict()
