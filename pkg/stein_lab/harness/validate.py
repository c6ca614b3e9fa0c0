"""
Experiment configuration files and their validation.

A config is a JSON object

    {"experiment": "fock-convergence", "seed": 7,
     "params": {"delta": 0.25}, "inputs": {"family": "fam.json"}, "out": "results/"}

validate() collects every problem as a Diagnostic instead of stopping at
the first one; nothing is computed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np

from stein_lab.errors import ConfigError, SteinLabError
from stein_lab.free_sets import FreeFamily
from stein_lab.harness.params import Diagnostic
from stein_lab.harness.registry import ExperimentSpec, get_experiment
from stein_lab.linalg import matrix_from_json, require_state

_CONFIG_KEYS = {"experiment", "seed", "params", "inputs", "out"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: Any = 0
    params: Mapping[str, Any] = field(default_factory=dict)
    inputs: Mapping[str, str] = field(default_factory=dict)
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", path="config")
        if "experiment" not in data:
            raise ConfigError("missing key 'experiment'", path="config")
        params = data.get("params", {})
        inputs = data.get("inputs", {})
        if not isinstance(params, Mapping):
            raise ConfigError("must be an object", path="params")
        if not isinstance(inputs, Mapping) or not all(isinstance(v, str) for v in inputs.values()):
            raise ConfigError("must map input names to file paths", path="inputs")
        return cls(
            experiment=str(data["experiment"]),
            seed=data.get("seed", 0),
            params=dict(params),
            inputs=dict(inputs),
            out=data.get("out"),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "params": dict(self.params),
            "inputs": dict(self.inputs),
            "out": self.out,
        }


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc), path=str(path)) from exc
    return ExperimentConfig.from_dict(data)


def load_input(kind: str, path: str | Path) -> Any:
    """Parse one input file: a FreeFamily, or a single-qubit density matrix in [re, im] JSON."""
    if kind == "family":
        return FreeFamily.load(path)
    if kind == "qubit_state":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(exc), path=str(path)) from exc
        rho = require_state(matrix_from_json(data), "rho")
        if rho.shape != (2, 2):
            raise ConfigError(f"expected a qubit state, got shape {rho.shape}", path=str(path))
        return np.asarray(rho)
    raise ConfigError(f"unknown input kind {kind!r}", path=str(path))


def load_inputs(spec: ExperimentSpec, inputs: Mapping[str, str]) -> dict[str, Any]:
    return {name: load_input(spec.inputs[name], path) for name, path in inputs.items()}


def _check_inputs(spec: ExperimentSpec, inputs: Mapping[str, str]) -> list[Diagnostic]:
    diagnostics = []
    for name, path in sorted(inputs.items()):
        where = f"inputs.{name}"
        if name not in spec.inputs:
            diagnostics.append(Diagnostic(where, f"{spec.id} accepts inputs {sorted(spec.inputs)}"))
            continue
        try:
            value = load_input(spec.inputs[name], path)
        except SteinLabError as exc:
            diagnostics.append(Diagnostic(where, str(exc)))
            continue
        if isinstance(value, FreeFamily) and spec.id == "stein-estimate" and not value.is_classical():
            diagnostics.append(Diagnostic(where, "stein-estimate needs a classical (diagonal) family"))
    return diagnostics


def validate(config: ExperimentConfig) -> list[Diagnostic]:
    """Every problem in the config; an empty list means it can run."""
    try:
        spec = get_experiment(config.experiment)
    except ConfigError:
        return [Diagnostic("experiment", f"unknown experiment {config.experiment!r}")]

    diagnostics = []
    seed = config.seed
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        diagnostics.append(Diagnostic("seed", "must be a non-negative integer"))
    diagnostics.extend(spec.check_params(config.params))
    diagnostics.extend(_check_inputs(spec, config.inputs))
    return diagnostics


def raise_for_diagnostics(diagnostics: list[Diagnostic]) -> None:
    if diagnostics:
        raise ConfigError("; ".join(str(d) for d in diagnostics))
