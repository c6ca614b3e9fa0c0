"""
Vacuum-in-support experiment for the delta-averaged channel, and the
fixed-delta coherent counterexample showing why the average is needed.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from stein_lab.errors import ValidationError
from stein_lab.fock.channels import LossParams, composite, pure_loss
from stein_lab.fock.lambda_map import LambdaResult, lambda_map
from stein_lab.fock.operators import FockOperator, coherent_state
from stein_lab.fock.support import SupportReport, support_test
from stein_lab.linalg import StateVector
from stein_lab.verdicts import CheckRecord, Verdict, inequality

logger = logging.getLogger(__name__)

DEFAULT_M_GRID = (1.0, 1e2, 1e4, 1e6, 1e8)
COHERENT_MARGIN = 0.02
COHERENT_PADDING = 40


def vacuum_vector(modes: int, cutoff: int) -> StateVector:
    amps = np.zeros((cutoff + 1) ** modes, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps)


@dataclass(frozen=True)
class CoherentCounterexample:
    """f(M) for the vacuum against one fixed-delta channel applied to a truncated |alpha>."""

    variant: str
    alpha: float
    delta: float
    cutoff: int
    tail: float
    floor: float
    support: SupportReport

    @property
    def slack(self) -> float:
        """Truncated input mass, amplified by the largest M on the grid."""
        return (1.0 + self.support.M_grid[-1]) * self.tail

    def record(self) -> CheckRecord:
        name = f"coherent_floor[{self.variant}]"
        if self.slack > COHERENT_MARGIN:
            return CheckRecord(
                name=name,
                verdict=Verdict.INCONCLUSIVE,
                lhs=self.floor,
                rhs=min(self.support.values),
                terms={"tail": self.tail, "slack": self.slack},
                detail=f"truncation slack {self.slack:.3g} dominates; retry with cutoff > {self.cutoff + COHERENT_PADDING}",
            )
        return inequality(
            name,
            self.floor - self.slack - COHERENT_MARGIN,
            min(self.support.values),
            terms={"floor": self.floor, "tail": self.tail, "alpha": self.alpha, "delta": self.delta, "f": list(self.support.values)},
            tol=0.0,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "alpha": self.alpha,
            "delta": self.delta,
            "cutoff": self.cutoff,
            "tail": self.tail,
            "floor": self.floor,
            "support": self.support.to_dict(),
        }


def coherent_counterexample(
    alpha: float,
    delta: float,
    M_grid: Sequence[float],
    *,
    cutoff: int,
    variant: str = "composite",
) -> CoherentCounterexample:
    """
    composite: E_{lambda} ∘ D_{mu} sends |alpha> to a multiple of |alpha/(1+delta)>,
               floor 1 - exp(-|alpha|^2 / (1+delta)^2).
    loss:      E_{lambda} sends |alpha> to |sqrt(lambda) alpha>, floor 1 - exp(-lambda |alpha|^2).
    """
    params = LossParams(delta)
    state = coherent_state(alpha, cutoff)
    rho = FockOperator.pure(state.vector, 1, cutoff)
    if variant == "composite":
        output = composite(delta, rho)
        floor = 1.0 - math.exp(-abs(alpha) ** 2 / (1.0 + delta) ** 2)
    elif variant == "loss":
        output = pure_loss(params.lam, rho)
        floor = 1.0 - math.exp(-params.lam * abs(alpha) ** 2)
    else:
        raise ValidationError(f"unknown counterexample variant {variant!r}", field="variant")
    report = support_test(vacuum_vector(1, cutoff), output, M_grid)
    return CoherentCounterexample(variant, float(alpha), float(delta), cutoff, state.tail, floor, report)


@dataclass(frozen=True)
class VacuumSupportReport:
    Delta: float
    cutoff: int
    averaged: LambdaResult
    support: SupportReport
    counterexamples: tuple[CoherentCounterexample, ...] = field(default_factory=tuple)
    runtime_s: float = 0.0

    def records(self) -> list[CheckRecord]:
        out = [
            self.averaged.record(),
            self.support.monotone_record("vacuum_support_monotone"),
            self.support.membership_record("vacuum_in_support"),
        ]
        out.extend(example.record() for example in self.counterexamples)
        return [rec.with_runtime(self.runtime_s / len(out)) for rec in out]

    def to_dict(self) -> dict[str, Any]:
        return {
            "Delta": self.Delta,
            "cutoff": self.cutoff,
            "quadrature": self.averaged.to_dict(),
            "support": self.support.to_dict(),
            "counterexamples": [example.to_dict() for example in self.counterexamples],
        }


def vacuum_support_experiment(
    rho: FockOperator,
    Delta: float,
    *,
    quad_nodes: Optional[int] = None,
    M_grid: Sequence[float] = DEFAULT_M_GRID,
    coherent_alpha: Optional[float] = 2.0,
    coherent_delta: float = 0.3,
    padding: int = COHERENT_PADDING,
) -> VacuumSupportReport:
    """
    support_test(vacuum, Lambda_Delta(rho)); when coherent_alpha is set, also the
    fixed-delta counterexample for both channel variants, on a cutoff padded so
    the truncated coherent tail stays negligible against the largest M.
    """
    started = time.perf_counter()
    if abs(rho.trace() - 1.0) > 1e-6:
        raise ValidationError(f"rho has trace {rho.trace():.6g}, expected 1", field="rho")
    averaged = lambda_map(Delta, rho, quad_nodes)
    support = support_test(vacuum_vector(rho.modes, rho.cutoff), averaged.output, M_grid)
    examples: tuple[CoherentCounterexample, ...] = ()
    if coherent_alpha is not None:
        working = rho.cutoff + padding
        examples = tuple(
            coherent_counterexample(coherent_alpha, coherent_delta, M_grid, cutoff=working, variant=variant)
            for variant in ("composite", "loss")
        )
    elapsed = time.perf_counter() - started
    logger.info("vacuum_support status=%s f_last=%.3e", support.status.value, support.values[-1])
    return VacuumSupportReport(float(Delta), rho.cutoff, averaged, support, examples, elapsed)
