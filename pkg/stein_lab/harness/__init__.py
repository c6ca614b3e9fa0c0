"""Experiment harness: registry, validation, seeded fan-out, reports and the CLI."""

from stein_lab.harness.params import Diagnostic
from stein_lab.harness.registry import ExperimentSpec, get_experiment, list_experiments, load_manifest, uncovered_lemmas
from stein_lab.harness.report import CSV_COLUMNS, Report, environment_fingerprint, reproduce_command
from stein_lab.harness.runner import run
from stein_lab.harness.validate import ExperimentConfig, load_config, validate

__all__ = [
    "CSV_COLUMNS",
    "Diagnostic",
    "ExperimentConfig",
    "ExperimentSpec",
    "Report",
    "environment_fingerprint",
    "get_experiment",
    "list_experiments",
    "load_config",
    "load_manifest",
    "reproduce_command",
    "run",
    "uncovered_lemmas",
    "validate",
]
