"""
End-to-end tests for the stein-lab command line.

Exit codes: 0 pass or inconclusive, 1 a check failed, 2 invalid
configuration or input.
"""

from __future__ import annotations

import json
import logging
import shlex

import pytest

from stein_lab.harness.cli import main


pytestmark = [
    pytest.mark.e2e,
    pytest.mark.product,
]

FOCK_GRID = "n_grid=[10,20,40]"


@pytest.fixture(autouse=True)
def _reset_package_logger():
    yield
    logger = logging.getLogger("stein_lab")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


# ============================================================
# LIST / VALIDATE
# ============================================================

def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "fock-convergence" in out
    assert "classical.blurring_lemma" in out


def test_list_json(capsys):
    assert main(["list", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {spec["id"] for spec in data["experiments"]} >= {"axioms", "vacuum-support"}
    assert "fock.lifted_convergence" in data["lemmas"]


def test_validate_ok(tmp_path, capsys):
    config = tmp_path / "ok.json"
    config.write_text(json.dumps({"experiment": "axioms", "seed": 1}), encoding="utf-8")
    assert main(["validate", str(config)]) == 0
    assert "[validate] OK (axioms)" in capsys.readouterr().out


def test_validate_reports_every_field(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(
        json.dumps({"experiment": "fock-convergence", "params": {"delta": 0.9, "n_grid": [4, 2]}}),
        encoding="utf-8",
    )
    assert main(["validate", str(config)]) == 2
    err = capsys.readouterr().err
    assert "[error] params.delta: delta must be in (0, 1/2]" in err
    assert "params.n_grid" in err


def test_validate_unreadable_file(tmp_path):
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


# ============================================================
# RUNS
# ============================================================

def test_run_writes_reports(tmp_path, capsys):
    code = main(["fock-convergence", "--set", FOCK_GRID, "--set", "threshold=2.0", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "fock-convergence.json").exists()
    assert (tmp_path / "fock-convergence.csv").exists()
    assert (tmp_path / "fock-convergence.convergence.csv").exists()
    assert "[fock-convergence] OK" in capsys.readouterr().out


def test_config_file_and_flags_merge(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(
        json.dumps({"experiment": "fock-convergence", "seed": 2, "params": {"threshold": 2.0}, "out": str(tmp_path / "r")}),
        encoding="utf-8",
    )
    assert main(["fock-convergence", "--config", str(config), "--set", FOCK_GRID]) == 0
    data = json.loads((tmp_path / "r" / "fock-convergence.json").read_text(encoding="utf-8"))
    assert data["environment"]["seed"] == 2
    assert data["params"]["n_grid"] == [10, 20, 40]


def test_failed_check_exits_one_and_reproduces(tmp_path, capsys):
    args = ["fock-convergence", "--seed", "5", "--set", FOCK_GRID, "--set", "threshold=0.0", "--no-write"]
    assert main(args) == 1
    out = capsys.readouterr().out
    line = next(l for l in out.splitlines() if "reproduce:" in l)
    command = shlex.split(line.split("reproduce:", 1)[1])
    assert command[:2] == ["stein-lab", "fock-convergence"]
    assert main(command[1:] + ["--out", str(tmp_path)]) == 1


def test_no_write_leaves_no_files(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["fock-convergence", "--set", FOCK_GRID, "--set", "threshold=2.0", "--no-write"]) == 0
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize(
    "args",
    [
        ["fock-convergence", "--set", "delta=0.9"],
        ["fock-convergence", "--tol", "-1"],
        ["axioms", "--input", "family=/nonexistent/fam.json"],
        ["stein-estimate", "--seed", "-3"],
    ],
)
def test_invalid_runs_exit_two(args, tmp_path):
    assert main(args + ["--out", str(tmp_path)]) == 2
    assert list(tmp_path.iterdir()) == []


def test_config_for_another_experiment(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"experiment": "axioms"}), encoding="utf-8")
    assert main(["fock-convergence", "--config", str(config)]) == 2


def test_unknown_verb_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["quantum-stein"])
    assert info.value.code == 2
