"""
Experiment registry.

Every CLI verb maps to one ExperimentSpec: defaults, a validator per
parameter, optional cross-parameter checks, the input files it accepts
and the catalog lemmas its records cover.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Callable, Mapping, Optional

from stein_lab.errors import ConfigError
from stein_lab.harness import experiments
from stein_lab.harness.experiments import ExperimentOutcome, RunContext
from stein_lab.harness.params import (
    Diagnostic,
    Validator,
    ascending_ints,
    distribution,
    distributions,
    half_interval,
    int_list,
    integer,
    list_of,
    nonnegative_grid,
    number,
    open_unit,
    optional,
)

Runner = Callable[[RunContext], ExperimentOutcome]
CrossCheck = Callable[[Mapping[str, Any]], list[Diagnostic]]

DEFAULT_M_GRID = [1.0, 1e2, 1e4, 1e6, 1e8]


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    summary: str
    defaults: Mapping[str, Any]
    validators: Mapping[str, Validator]
    runner: Runner
    lemmas: tuple[str, ...]
    inputs: Mapping[str, str] = field(default_factory=dict)
    cross_check: Optional[CrossCheck] = None

    def resolve(self, overrides: Optional[Mapping[str, Any]] = None) -> dict[str, Any]:
        """Defaults merged with overrides; unknown keys are left for check_params to report."""
        params = dict(self.defaults)
        params.update(overrides or {})
        return params

    def check_params(self, overrides: Optional[Mapping[str, Any]] = None) -> list[Diagnostic]:
        overrides = overrides or {}
        diagnostics = [
            Diagnostic(f"params.{key}", f"unknown parameter for {self.id}")
            for key in sorted(overrides)
            if key not in self.defaults
        ]
        params = self.resolve(overrides)
        for key, check in self.validators.items():
            message = check(params[key])
            if message is not None:
                diagnostics.append(Diagnostic(f"params.{key}", message))
        if not diagnostics and self.cross_check is not None:
            diagnostics.extend(self.cross_check(params))
        return diagnostics

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "summary": self.summary,
            "defaults": dict(self.defaults),
            "inputs": dict(self.inputs),
            "lemmas": list(self.lemmas),
        }


# ---------------------------------------------------------------------
# cross-parameter checks
# ---------------------------------------------------------------------

def _stein_cross(params: Mapping[str, Any]) -> list[Diagnostic]:
    out = []
    if params["eps"] + params["eta"] >= 1.0:
        out.append(Diagnostic("params.eta", "eps + eta must be below 1"))
    if any(len(q) != len(params["p"]) for q in params["generators"]):
        out.append(Diagnostic("params.generators", "generators and p have different alphabet sizes"))
    return out


def _fock_cross(params: Mapping[str, Any]) -> list[Diagnostic]:
    out = []
    if len(params["h"]) != len(params["k"]):
        out.append(Diagnostic("params.k", "h and k must have the same number of modes"))
    elif max(sum(params["h"]), sum(params["k"])) > params["n_grid"][0]:
        out.append(Diagnostic("params.n_grid", "every n must be at least the total occupation of h and k"))
    cutoff = params["cutoff"]
    if cutoff is not None and cutoff < max(params["h"] + params["k"]):
        out.append(Diagnostic("params.cutoff", "cutoff below the largest occupation of h or k"))
    return out


def _vacuum_cross(params: Mapping[str, Any]) -> list[Diagnostic]:
    rank = params["rank"]
    if rank is not None and rank > params["cutoff"] + 1:
        return [Diagnostic("params.rank", f"rank exceeds the Fock dimension {params['cutoff'] + 1}")]
    return []


CHAIN_N_MAX = 3


def _blurring_cross(params: Mapping[str, Any]) -> list[Diagnostic]:
    if params["chain_n"][-1] > CHAIN_N_MAX:
        return [Diagnostic("params.chain_n", f"entries must be at most {CHAIN_N_MAX}")]
    return []


# ---------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------

_SPECS = (
    ExperimentSpec(
        id="check-lemmas",
        summary="quick suites over the combinatorial, divergence and blurring identities",
        defaults={
            "instances": 100,
            "hyp_N_max": 40,
            "lower_bound_N_max": 24,
            "kraus_n_max": 5,
            "d_r_n_max": 20,
            "tail_instances": 100,
            "output_norm_n_max": 20,
        },
        validators={
            "instances": integer(1),
            "hyp_N_max": integer(1, 200),
            "lower_bound_N_max": integer(1, 30),
            "kraus_n_max": integer(1, 8),
            "d_r_n_max": integer(2, 200),
            "tail_instances": integer(1),
            "output_norm_n_max": integer(2, 40),
        },
        runner=experiments.run_check_lemmas,
        lemmas=(
            "types.counting",
            "hypergeometric.duality",
            "hypergeometric.tail_bounds",
            "hypergeometric.lower_bound",
            "states.fidelity_chain",
            "states.positive_part",
            "states.purification",
            "divergences.relative_below_max",
            "divergences.sandwich",
            "divergences.weak_converse_duality",
            "divergences.triangle",
            "divergences.relative_to_set",
            "symmetric.partial_trace",
            "classical.concentration",
            "quantum.gamma_decomposition",
            "quantum.kraus",
            "quantum.theta_channel",
            "quantum.d_r_bound",
            "quantum.tail_filtering",
            "quantum.output_norm",
            "quantum.asymptotic_continuity",
        ),
    ),
    ExperimentSpec(
        id="classical-lemma",
        summary="classical blurring lemma on seeded random instances",
        defaults={"trials": 200, "max_n": 30, "max_alphabet": 3},
        validators={"trials": integer(1), "max_n": integer(2, 200), "max_alphabet": integer(2, 6)},
        runner=experiments.run_classical_lemma,
        lemmas=("classical.blurring_lemma",),
    ),
    ExperimentSpec(
        id="classical-stein",
        summary="one-shot classical Stein inequality on seeded random instances",
        defaults={"trials": 50, "max_n": 12, "max_alphabet": 2, "max_inconclusive_rate": 0.1},
        validators={
            "trials": integer(1),
            "max_n": integer(2, 40),
            "max_alphabet": integer(2, 4),
            "max_inconclusive_rate": number(0.0, 1.0),
        },
        runner=experiments.run_classical_stein,
        lemmas=("classical.gsl",),
    ),
    ExperimentSpec(
        id="quantum-blurring",
        summary="symmetric-subspace blurring map, its decomposition, norm bounds and the inequality chain",
        defaults={
            "kraus_n_max": 8,
            "kraus_dims": [2, 3],
            "kraus_per_config": 3,
            "d_r_n_max": 20,
            "tail_instances": 100,
            "output_norm_n_max": 20,
            "oracle_n_max": 4,
            "oracle_deltas": [0.1, 0.25, 0.5],
            "chain_n": [1, 2, 3],
            "chain_delta": 0.5,
            "chain_perturbation": 0.05,
            "proxy_n": [4, 8, 16],
            "proxy_alpha": 0.3,
            "proxy_Delta": 0.5,
            "M_grid": DEFAULT_M_GRID,
        },
        validators={
            "kraus_n_max": integer(1, 10),
            "kraus_dims": int_list(2),
            "kraus_per_config": integer(1),
            "d_r_n_max": integer(2, 200),
            "tail_instances": integer(1),
            "output_norm_n_max": integer(2, 40),
            "oracle_n_max": integer(1, 6),
            "oracle_deltas": list_of(half_interval("delta")),
            "chain_n": ascending_ints(1),
            "chain_delta": half_interval("delta"),
            "chain_perturbation": number(0.0, 1.0),
            "proxy_n": ascending_ints(1),
            "proxy_alpha": number(0.0, 10.0),
            "proxy_Delta": half_interval("Delta"),
            "M_grid": nonnegative_grid,
        },
        runner=experiments.run_quantum_blurring,
        lemmas=(
            "quantum.blur_q_oracle",
            "quantum.gamma_decomposition",
            "quantum.kraus",
            "quantum.theta_channel",
            "quantum.d_r_bound",
            "quantum.tail_filtering",
            "quantum.output_norm",
            "quantum.chain",
            "quantum.dmax_elementary",
            "quantum.asymptotic_continuity",
            "quantum.blurring_proxy",
            "divergences.triangle",
            "divergences.relative_to_set",
        ),
        inputs={"rho": "qubit_state"},
        cross_check=_blurring_cross,
    ),
    ExperimentSpec(
        id="fock-convergence",
        summary="lifted blurring against its Fock-space limit along an n grid",
        defaults={"h": [1], "k": [1], "delta": 0.25, "n_grid": [40, 80, 160], "cutoff": None, "threshold": 0.05},
        validators={
            "h": int_list(0),
            "k": int_list(0),
            "delta": half_interval("delta"),
            "n_grid": ascending_ints(1),
            "cutoff": optional(integer(1, 60)),
            "threshold": number(0.0, 2.0),
        },
        runner=experiments.run_fock_convergence,
        lemmas=("fock.lifted_convergence", "fock.pure_loss_kraus"),
        cross_check=_fock_cross,
    ),
    ExperimentSpec(
        id="vacuum-support",
        summary="vacuum in the support of the delta-averaged pure-loss output, with the coherent counterexample",
        defaults={
            "states": 20,
            "cutoff": 12,
            "Delta": 0.5,
            "quad_nodes": 64,
            "M_grid": DEFAULT_M_GRID,
            "rank": None,
            "coherent_alpha": 2.0,
            "coherent_delta": 0.3,
        },
        validators={
            "states": integer(1),
            "cutoff": integer(1, 60),
            "Delta": half_interval("Delta"),
            "quad_nodes": integer(2, 4096),
            "M_grid": nonnegative_grid,
            "rank": optional(integer(1)),
            "coherent_alpha": number(0.0, 10.0),
            "coherent_delta": half_interval("delta"),
        },
        runner=experiments.run_vacuum_support,
        lemmas=(
            "fock.lambda_quadrature",
            "fock.support_lemma",
            "fock.vacuum_in_support",
            "fock.coherent_counterexample",
        ),
        cross_check=_vacuum_cross,
    ),
    ExperimentSpec(
        id="axioms",
        summary="free-family axioms on the product and SEP families and on families built to break one axiom",
        defaults={"product_max_level": 3, "sep_samples": 16, "sep_max_level": 1, "broken_threshold": 0.1},
        validators={
            "product_max_level": integer(2, 5),
            "sep_samples": integer(16, 2000),
            "sep_max_level": integer(1, 2),
            "broken_threshold": open_unit("broken_threshold"),
        },
        runner=experiments.run_axioms,
        lemmas=("free_sets.axioms",),
        inputs={"family": "family"},
    ),
    ExperimentSpec(
        id="stein-estimate",
        summary="finite-n rates of D_H, D and smoothed D_max against a classical family",
        defaults={
            "p": [0.7, 0.3],
            "generators": [[0.5, 0.5], [0.9, 0.1]],
            "n_grid": [2, 4, 8],
            "eps": 0.1,
            "eta": 0.1,
        },
        validators={
            "p": distribution,
            "generators": distributions,
            "n_grid": ascending_ints(1),
            "eps": open_unit("eps"),
            "eta": open_unit("eta"),
        },
        runner=experiments.run_stein_estimate,
        lemmas=("classical.gsl", "divergences.weak_converse_duality"),
        inputs={"family": "family"},
        cross_check=_stein_cross,
    ),
)

_REGISTRY = {spec.id: spec for spec in _SPECS}


def list_experiments() -> list[ExperimentSpec]:
    return list(_SPECS)


def get_experiment(experiment_id: str) -> ExperimentSpec:
    try:
        return _REGISTRY[experiment_id]
    except KeyError:
        raise ConfigError(f"unknown experiment {experiment_id!r}; known: {sorted(_REGISTRY)}", path="experiment") from None


@lru_cache(maxsize=1)
def load_manifest() -> dict[str, str]:
    """Catalog lemma key -> one-line description."""
    text = resources.files("stein_lab.catalog").joinpath("manifest.json").read_text(encoding="utf-8")
    return dict(json.loads(text)["lemmas"])


def uncovered_lemmas() -> list[str]:
    """Catalog keys no experiment claims."""
    covered = {key for spec in _SPECS for key in spec.lemmas}
    return sorted(set(load_manifest()) - covered)
