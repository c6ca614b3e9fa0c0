"""Truncated Fock space: loss and damping channels, the lifted blurring map and its limit, support tests."""

from stein_lab.fock.channels import (
    LossParams,
    composite,
    damping,
    kraus_completeness_residual,
    loss_superoperator,
    pure_loss,
    pure_loss_kraus,
    pure_loss_via_kraus,
)
from stein_lab.fock.convergence import ConvergenceRow, ConvergenceStudy, convergence_study
from stein_lab.fock.experiment import (
    CoherentCounterexample,
    VacuumSupportReport,
    coherent_counterexample,
    vacuum_support_experiment,
    vacuum_vector,
)
from stein_lab.fock.lambda_map import LambdaResult, lambda_map, midpoint_nodes
from stein_lab.fock.lift import lift, lifted_blur, unlift
from stein_lab.fock.limit import composed_limit, limit_entry, limit_operator, limit_two_path_residual
from stein_lab.fock.operators import (
    FockOperator,
    TruncatedState,
    coherent_state,
    occupation_index,
    occupations,
    random_fock_state,
    thermal_like,
)
from stein_lab.fock.support import SupportReport, SupportStatus, kernel_floor, support_test

__all__ = [
    "CoherentCounterexample",
    "ConvergenceRow",
    "ConvergenceStudy",
    "FockOperator",
    "LambdaResult",
    "LossParams",
    "SupportReport",
    "SupportStatus",
    "TruncatedState",
    "VacuumSupportReport",
    "coherent_counterexample",
    "coherent_state",
    "composed_limit",
    "composite",
    "convergence_study",
    "damping",
    "kernel_floor",
    "kraus_completeness_residual",
    "lambda_map",
    "lift",
    "lifted_blur",
    "limit_entry",
    "limit_operator",
    "limit_two_path_residual",
    "loss_superoperator",
    "midpoint_nodes",
    "occupation_index",
    "occupations",
    "pure_loss",
    "pure_loss_kraus",
    "pure_loss_via_kraus",
    "random_fock_state",
    "support_test",
    "thermal_like",
    "unlift",
    "vacuum_support_experiment",
    "vacuum_vector",
]
