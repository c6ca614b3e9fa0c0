"""
Experiment runners. Each takes a RunContext with validated, defaulted
parameters and returns the check records plus any sweep tables.
"""

from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from stein_lab.classical import (
    blurring_campaign_trial,
    gsl_campaign_trial,
    stein_estimate,
)
from stein_lab.config import get_tolerances
from stein_lab.divergences import ClassicalDistribution
from stein_lab.fock import (
    FockOperator,
    LossParams,
    convergence_study,
    kraus_completeness_residual,
    limit_two_path_residual,
    pure_loss,
    pure_loss_kraus,
    pure_loss_via_kraus,
    random_fock_state,
    vacuum_support_experiment,
)
from stein_lab.free_sets import (
    BROKEN_AXIOMS,
    AxiomReport,
    FreeFamily,
    build_broken_family,
    build_product_family,
    build_sep_family,
    check_axioms,
)
from stein_lab.free_sets.axioms import MEMBERSHIP_TOL
from stein_lab.harness.pool import fan_out
from stein_lab.harness.suites import (
    d_r_decay,
    kraus_identity,
    output_norm_batch,
    random_sym_operator,
    run_lemma_suites,
    tail_filtering_batch,
    theta_identity,
)
from stein_lab.linalg.sampling import random_density_matrix
from stein_lab.quantum import (
    SymTypeOperator,
    appended_copies,
    blur_q,
    blur_q_dense,
    blur_rho,
    blurring_proxy_trend,
    check_dmax_elementary,
    check_gqsl_chain,
    perturbed_symmetric_state,
)
from stein_lab.typeclasses import enumerate_types
from stein_lab.verdicts import CheckRecord, Verdict, inapplicable, inequality

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunContext:
    params: Mapping[str, Any]
    seed: int
    jobs: int = 1
    inputs: Mapping[str, Any] = field(default_factory=dict)

    def rng(self, stream: int) -> np.random.Generator:
        """Independent generator per named stream of the run seed."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(stream,)))


@dataclass(frozen=True)
class ExperimentOutcome:
    records: list[CheckRecord]
    tables: dict[str, list[dict[str, Any]]] = field(default_factory=dict)


# ---------------------------------------------------------------------
# check-lemmas
# ---------------------------------------------------------------------

def run_check_lemmas(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    records = run_lemma_suites(
        ctx.rng(0),
        instances=p["instances"],
        hyp_N_max=p["hyp_N_max"],
        lower_bound_N_max=p["lower_bound_N_max"],
        kraus_n_max=p["kraus_n_max"],
        d_r_n_max=p["d_r_n_max"],
        tail_instances=p["tail_instances"],
        output_norm_n_max=p["output_norm_n_max"],
    )
    return ExperimentOutcome(records)


# ---------------------------------------------------------------------
# classical-lemma / classical-stein
# ---------------------------------------------------------------------

def run_classical_lemma(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    trial = functools.partial(blurring_campaign_trial, max_n=p["max_n"], max_alphabet=p["max_alphabet"])
    return ExperimentOutcome(fan_out(trial, ctx.seed, p["trials"], ctx.jobs))


def run_classical_stein(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    trial = functools.partial(gsl_campaign_trial, max_n=p["max_n"], max_alphabet=p["max_alphabet"])
    records = fan_out(trial, ctx.seed, p["trials"], ctx.jobs)
    inconclusive = sum(rec.verdict is Verdict.INCONCLUSIVE for rec in records)
    rate = inconclusive / len(records)
    records.append(
        inequality(
            "classical_gsl_inconclusive_rate",
            rate,
            p["max_inconclusive_rate"],
            terms={"inconclusive": inconclusive, "trials": len(records)},
            tol=0.0,
        )
    )
    return ExperimentOutcome(records)


# ---------------------------------------------------------------------
# quantum-blurring
# ---------------------------------------------------------------------

def blur_oracle_records(rng: np.random.Generator, n_max: int, deltas: Sequence[float]) -> list[CheckRecord]:
    """blur_q against the full tensor-space evaluation, and trace behaviour of both maps, d = 2."""
    tol = get_tolerances().spectral
    records = []
    for n, delta in itertools.product(range(1, n_max + 1), deltas):
        x = random_sym_operator(n, 2, rng)
        residual = float(np.max(np.abs(blur_q(n, delta, x).to_dense() - blur_q_dense(n, delta, x.to_dense(), 2))))
        label = f"n={n},delta={delta:g}"
        records.append(
            inequality(f"blur_q_oracle[{label}]", residual, 0.0, terms={"k": appended_copies(n, delta)}, tol=tol)
        )

        state = random_density_matrix(len(enumerate_types(n, 2)), rng)
        sym_state = SymTypeOperator(n, 2, state)
        # blur_q discards the weight pushed out of Sym^n
        records.append(inequality(f"blur_q_trace[{label}]", blur_q(n, delta, sym_state).trace().real, 1.0, tol=tol))

        rho = random_density_matrix(2, rng)
        out = blur_rho(n, delta, rho, sym_state.to_dense())
        records.append(inequality(f"blur_rho_trace[{label}]", abs(np.trace(out).real - 1.0), 0.0, tol=tol))
    return records


def _qubit_product_family(max_level: int) -> FreeFamily:
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    return build_product_family([zero, one, plus], max_level)


def chain_records(
    rng: np.random.Generator,
    n_grid: Sequence[int],
    delta: float,
    perturbation: float,
    rho: Optional[np.ndarray] = None,
) -> list[CheckRecord]:
    """Chain records per n on the qubit product family; rho defaults to a random qubit state."""
    top = max(n_grid)
    family = _qubit_product_family(max(top + appended_copies(top, delta), 3))
    rho = random_density_matrix(2, rng) if rho is None else rho
    records = []
    for n in n_grid:
        for rec in check_gqsl_chain(rho, family, n, delta, perturbation=perturbation, rng=rng):
            records.append(replace(rec, name=f"{rec.name}[n={n}]"))
    rho_b = perturbed_symmetric_state(rho, 2, perturbation, rng)
    records.extend(check_dmax_elementary(rho, 1, rho_b, 2, family))
    return records


def run_quantum_blurring(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    rng = ctx.rng(0)
    records = [
        kraus_identity(rng, p["kraus_n_max"], tuple(p["kraus_dims"]), p["kraus_per_config"]),
        theta_identity(p["kraus_n_max"], tuple(p["kraus_dims"])),
        d_r_decay(p["d_r_n_max"]),
        tail_filtering_batch(rng, p["tail_instances"]),
        output_norm_batch(rng, p["output_norm_n_max"]),
    ]
    records.extend(blur_oracle_records(rng, p["oracle_n_max"], p["oracle_deltas"]))
    records.extend(
        chain_records(ctx.rng(1), p["chain_n"], p["chain_delta"], p["chain_perturbation"], ctx.inputs.get("rho"))
    )

    trend = blurring_proxy_trend(p["proxy_n"], p["proxy_alpha"], p["proxy_Delta"], p["M_grid"])
    records.extend(proxy.monotone_record() for proxy in trend)
    rows = [
        {"n": proxy.n, "M": m, "f": f}
        for proxy in trend
        for m, f in zip(proxy.M_grid, proxy.values)
    ]
    return ExperimentOutcome(records, {"blurring_proxy": rows})


# ---------------------------------------------------------------------
# fock-convergence
# ---------------------------------------------------------------------

def run_fock_convergence(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    h, k, delta = tuple(p["h"]), tuple(p["k"]), float(p["delta"])
    study = convergence_study(h, k, delta, p["n_grid"], cutoff=p["cutoff"], threshold=p["threshold"])
    cutoff = p["cutoff"] if p["cutoff"] is not None else max(max(h), max(k))
    records = study.records()
    records.append(
        inequality(
            "fock_limit_two_paths",
            limit_two_path_residual(h, k, delta, cutoff),
            0.0,
            detail=f"h={list(h)} k={list(k)} delta={delta:g}",
            tol=1e-12,
        )
    )

    lam = LossParams(delta).lam
    kraus = pure_loss_kraus(lam, cutoff)
    records.append(inequality("pure_loss_kraus_completeness", kraus_completeness_residual(kraus), 0.0, tol=get_tolerances().spectral))
    x = FockOperator.ketbra(h, k, cutoff)
    records.append(
        inequality(
            "pure_loss_kraus_action",
            (pure_loss(lam, x) - pure_loss_via_kraus(lam, x)).trace_norm(),
            0.0,
            tol=get_tolerances().spectral,
        )
    )
    return ExperimentOutcome(records, {"convergence": study.to_rows()})


# ---------------------------------------------------------------------
# vacuum-support
# ---------------------------------------------------------------------

def vacuum_support_trial(
    seed: np.random.SeedSequence,
    index: int,
    *,
    cutoff: int,
    Delta: float,
    quad_nodes: int,
    M_grid: Sequence[float],
    rank: Optional[int],
    coherent_alpha: float,
    coherent_delta: float,
) -> list[CheckRecord]:
    """One random single-mode state; the state-independent coherent counterexample runs with trial 0 only."""
    rho = random_fock_state(1, cutoff, np.random.default_rng(seed), rank)
    report = vacuum_support_experiment(
        rho,
        Delta,
        quad_nodes=quad_nodes,
        M_grid=M_grid,
        coherent_alpha=coherent_alpha if index == 0 else None,
        coherent_delta=coherent_delta,
    )
    return [
        rec if rec.name.startswith("coherent_floor") else replace(rec, name=f"{rec.name}[{index}]")
        for rec in report.records()
    ]


def run_vacuum_support(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    trial = functools.partial(
        vacuum_support_trial,
        cutoff=p["cutoff"],
        Delta=p["Delta"],
        quad_nodes=p["quad_nodes"],
        M_grid=tuple(p["M_grid"]),
        rank=p["rank"],
        coherent_alpha=p["coherent_alpha"],
        coherent_delta=p["coherent_delta"],
    )
    records = fan_out(trial, ctx.seed, p["states"], ctx.jobs)
    rows = [
        {
            "state": rec.name,
            "f_min": rec.lhs,
            "status": rec.terms.get("status"),
            "first_M_below": rec.terms.get("first_M_below"),
        }
        for rec in records
        if rec.name.startswith("vacuum_in_support")
    ]
    return ExperimentOutcome(records, {"vacuum_support": rows})


# ---------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------

def axiom_records(label: str, report: AxiomReport) -> list[CheckRecord]:
    """Every axiom of a family that should satisfy them all."""
    records = []
    for check in report.checks:
        name = f"axiom[{label}:{check.axiom}]"
        if check.skipped:
            records.append(inapplicable(name, check.detail))
        else:
            records.append(inequality(name, check.residual, MEMBERSHIP_TOL, detail=check.detail, tol=0.0))
    return records


def broken_axiom_record(axiom: str, report: AxiomReport, threshold: float) -> CheckRecord:
    """The intended axiom fails with residual above the threshold."""
    check = report.by_axiom()[axiom]
    return inequality(
        f"axiom_broken[{axiom}]",
        threshold,
        check.residual,
        terms={"failed": report.failed()},
        detail=check.detail,
        tol=0.0,
    )


def run_axioms(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    families = {
        "product": _qubit_product_family(p["product_max_level"]),
        "sep": build_sep_family(2, 2, p["sep_samples"], ctx.seed, p["sep_max_level"]),
    }
    if "family" in ctx.inputs:
        families["input"] = ctx.inputs["family"]

    records: list[CheckRecord] = []
    rows = []
    for label, family in families.items():
        report = check_axioms(family)
        records.extend(axiom_records(label, report))
        rows.append({"family": label, **{c.axiom: c.residual for c in report.checks}, "c": report.c})
    for axiom in BROKEN_AXIOMS:
        report = check_axioms(build_broken_family(axiom))
        records.append(broken_axiom_record(axiom, report, p["broken_threshold"]))
        rows.append({"family": f"broken-{axiom}", **{c.axiom: c.residual for c in report.checks}, "c": report.c})
    return ExperimentOutcome(records, {"axioms": rows})


# ---------------------------------------------------------------------
# stein-estimate
# ---------------------------------------------------------------------

def run_stein_estimate(ctx: RunContext) -> ExperimentOutcome:
    p = ctx.params
    source = ClassicalDistribution(np.asarray(p["p"], dtype=float))
    if "family" in ctx.inputs:
        family = ctx.inputs["family"]
    else:
        family = build_product_family([np.diag(q).astype(complex) for q in p["generators"]], 1)

    records = []
    rows = []
    for n in p["n_grid"]:
        estimate = stein_estimate(source, family, n, p["eps"], p["eta"])
        rows.append(estimate.to_dict())
        for side, ok in (("upper", estimate.duality_upper_ok), ("lower", estimate.duality_lower_ok)):
            records.append(
                CheckRecord(
                    name=f"stein_duality_{side}[n={n}]",
                    verdict=Verdict.PASS if ok else Verdict.FAIL,
                    terms={"hypothesis_rate": estimate.hypothesis_rate, "smoothed_max_rate": estimate.smoothed_max_rate},
                )
            )
    logger.info("stein_estimate rows=%d", len(rows))
    return ExperimentOutcome(records, {"stein_estimate": rows})


__all__ = [
    "ExperimentOutcome",
    "RunContext",
    "axiom_records",
    "blur_oracle_records",
    "broken_axiom_record",
    "chain_records",
    "run_axioms",
    "run_check_lemmas",
    "run_classical_lemma",
    "run_classical_stein",
    "run_fock_convergence",
    "run_quantum_blurring",
    "run_stein_estimate",
    "run_vacuum_support",
    "vacuum_support_trial",
]
