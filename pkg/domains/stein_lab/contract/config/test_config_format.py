"""
Contract tests for experiment config files and input files.

validate() reports every problem at a dotted path and computes nothing.
"""

from __future__ import annotations

import json

import numpy as np
import pytest

from stein_lab.errors import ConfigError
from stein_lab.free_sets import build_explicit_family, build_product_family
from stein_lab.harness import ExperimentConfig, load_config, validate
from stein_lab.harness.validate import load_input
from stein_lab.linalg import matrix_to_json


pytestmark = [
    pytest.mark.contract,
    pytest.mark.domain,
]


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


# ============================================================
# CONFIG OBJECT
# ============================================================

def test_round_trip_through_dict():
    config = ExperimentConfig("axioms", seed=4, params={"sep_samples": 20}, out="results")
    assert ExperimentConfig.from_dict(config.to_dict()) == config


@pytest.mark.parametrize(
    "data,path",
    [
        ({"seed": 1}, "config"),
        ({"experiment": "axioms", "colour": "red"}, "config"),
        ({"experiment": "axioms", "params": [1, 2]}, "params"),
        ({"experiment": "axioms", "inputs": {"family": 3}}, "inputs"),
    ],
)
def test_malformed_configs(data, path):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_dict(data)
    assert info.value.path == path


def test_unreadable_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)


# ============================================================
# DIAGNOSTICS
# ============================================================

def test_valid_config_has_no_diagnostics(tmp_path):
    config = load_config(_write(tmp_path / "c.json", {"experiment": "fock-convergence", "seed": 7}))
    assert validate(config) == []


def test_every_problem_is_collected():
    config = ExperimentConfig("fock-convergence", seed=-1, params={"delta": 0.9, "n_grid": [8, 4]})
    paths = sorted(d.path for d in validate(config))
    assert paths == ["params.delta", "params.n_grid", "seed"]


def test_unknown_experiment_short_circuits():
    (diagnostic,) = validate(ExperimentConfig("quantum-stein"))
    assert diagnostic.path == "experiment"


def test_input_problems(tmp_path):
    config = ExperimentConfig(
        "axioms",
        inputs={"family": str(tmp_path / "missing.json"), "rho": str(tmp_path / "rho.json")},
    )
    diagnostics = {d.path: d.message for d in validate(config)}
    assert set(diagnostics) == {"inputs.family", "inputs.rho"}
    assert "accepts inputs" in diagnostics["inputs.rho"]


def test_stein_estimate_needs_classical_family(tmp_path):
    plus = np.full((2, 2), 0.5, dtype=complex)
    family = build_product_family([np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex), plus], 1)
    family.dump(tmp_path / "fam.json")
    config = ExperimentConfig("stein-estimate", inputs={"family": str(tmp_path / "fam.json")})
    (diagnostic,) = validate(config)
    assert diagnostic.message == "stein-estimate needs a classical (diagonal) family"


# ============================================================
# INPUT FILES
# ============================================================

def test_family_file_keys(tmp_path):
    family = build_explicit_family(2, {1: [np.eye(2) / 2]}, reference=[0.5, 0.5])
    family.dump(tmp_path / "fam.json")
    data = json.loads((tmp_path / "fam.json").read_text(encoding="utf-8"))
    assert {"dim", "rule", "levels", "reference"} <= set(data)
    assert list(data["levels"]) == ["1"]
    assert load_input("family", tmp_path / "fam.json").dim == 2


def test_qubit_state_input(tmp_path):
    path = _write(tmp_path / "rho.json", matrix_to_json(np.diag([0.25, 0.75])))
    assert load_input("qubit_state", path).shape == (2, 2)
    wide = _write(tmp_path / "wide.json", matrix_to_json(np.eye(3) / 3))
    with pytest.raises(ConfigError):
        load_input("qubit_state", wide)
    with pytest.raises(ConfigError):
        load_input("density", path)
