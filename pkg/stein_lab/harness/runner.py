"""
Run one validated experiment configuration into a Report.
"""

from __future__ import annotations

import logging
import time

from stein_lab.config import get_tolerances
from stein_lab.harness.experiments import RunContext
from stein_lab.harness.registry import get_experiment
from stein_lab.harness.report import Report, environment_fingerprint, reproduce_command
from stein_lab.harness.validate import ExperimentConfig, load_inputs, raise_for_diagnostics, validate
from stein_lab.verdicts import Verdict

logger = logging.getLogger(__name__)


def run(config: ExperimentConfig, *, jobs: int = 1) -> Report:
    """
    Validate, execute and assemble the report. Configuration problems raise
    ConfigError before anything is computed; failed checks do not raise.
    """
    raise_for_diagnostics(validate(config))
    spec = get_experiment(config.experiment)
    params = spec.resolve(config.params)
    inputs = load_inputs(spec, config.inputs)
    tolerances = get_tolerances()

    logger.info("experiment start id=%s seed=%d jobs=%d", spec.id, config.seed, jobs)
    started = time.perf_counter()
    outcome = spec.runner(RunContext(params=params, seed=config.seed, jobs=max(1, jobs), inputs=inputs))
    elapsed = time.perf_counter() - started

    command = reproduce_command(spec.id, config.seed, tolerances.certificate, config.params, config.inputs)
    checks = tuple(
        record.with_reproduce(command) if record.verdict is Verdict.FAIL else record
        for record in outcome.records
    )
    report = Report(
        experiment=spec.id,
        checks=checks,
        environment=environment_fingerprint(config.seed, tolerances),
        params=params,
        tables=outcome.tables,
    )
    summary = report.summary
    logger.info(
        "experiment finish id=%s checks=%d pass=%d fail=%d inconclusive=%d elapsed=%.2fs",
        spec.id,
        len(checks),
        summary[Verdict.PASS.value],
        summary[Verdict.FAIL.value],
        summary[Verdict.INCONCLUSIVE.value],
        elapsed,
    )
    for record in report.failures():
        logger.warning("check failed name=%s slack=%s", record.name, record.slack)
    return report
