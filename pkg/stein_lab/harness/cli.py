"""
stein-lab command line.

    stein-lab list [--json]
    stein-lab validate CONFIG
    stein-lab <experiment> [--config FILE] [--seed S] [--tol T] [--jobs J]
                           [--set key=json]... [--input name=path]... [--out PATH]

Exit codes: 0 all checks pass or are inconclusive, 1 some check failed,
2 the configuration or an input is invalid.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional, Sequence

from stein_lab.config import get_tolerances, set_tolerances
from stein_lab.errors import ConfigError, PreconditionError, SizeGuardError
from stein_lab.harness.registry import list_experiments, load_manifest, uncovered_lemmas
from stein_lab.harness.runner import run
from stein_lab.harness.validate import ExperimentConfig, load_config, validate
from stein_lab.logs import configure_logging

logger = logging.getLogger(__name__)

DEFAULT_OUT = Path("results")


def _key_value(raw: str) -> tuple[str, str]:
    key, sep, value = raw.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {raw!r}")
    return key, value


def _json_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON experiment config; flags override it")
    parser.add_argument("--seed", type=int, default=None, help="root seed (default: config seed, else 0)")
    parser.add_argument("--tol", type=float, default=None, help="certificate tolerance for verdicts")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for seeded campaigns")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        type=_key_value,
        default=[],
        metavar="KEY=JSON",
        help="parameter override, value parsed as JSON. Repeatable.",
    )
    parser.add_argument(
        "--input",
        dest="inputs",
        action="append",
        type=_key_value,
        default=[],
        metavar="NAME=PATH",
        help="input file (family or qubit state). Repeatable.",
    )
    parser.add_argument("--out", type=Path, default=None, help=f"report directory or .json path (default: {DEFAULT_OUT})")
    parser.add_argument("--no-write", action="store_true", help="print the summary only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stein-lab", description="Finite-n checks for generalised Stein lemmas.")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default: STEIN_LAB_LOG_LEVEL or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    listing = sub.add_parser("list", help="list experiments and the lemmas they cover")
    listing.add_argument("--json", action="store_true")

    checking = sub.add_parser("validate", help="validate a config file without running it")
    checking.add_argument("config", type=Path)

    for spec in list_experiments():
        _add_run_arguments(sub.add_parser(spec.id, help=spec.summary))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    base = load_config(args.config) if args.config is not None else ExperimentConfig(args.command)
    if base.experiment != args.command:
        raise ConfigError(f"config is for {base.experiment!r}, not {args.command!r}", path="experiment")
    params = dict(base.params)
    params.update({key: _json_value(value) for key, value in args.overrides})
    inputs = dict(base.inputs)
    inputs.update(dict(args.inputs))
    return ExperimentConfig(
        experiment=args.command,
        seed=base.seed if args.seed is None else args.seed,
        params=params,
        inputs=inputs,
        out=str(args.out) if args.out is not None else base.out,
    )


def _cmd_list(args: argparse.Namespace) -> int:
    specs = list_experiments()
    if args.json:
        print(json.dumps({"experiments": [spec.to_dict() for spec in specs], "lemmas": load_manifest()}, indent=2))
        return 0
    for spec in specs:
        print(f"{spec.id:18s} {spec.summary}")
        for key in spec.lemmas:
            print(f"{'':18s}   {key}")
    missing = uncovered_lemmas()
    if missing:
        print(f"[warn] lemmas without an experiment: {missing}", file=sys.stderr)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as err:
        print(f"[error] {err}", file=sys.stderr)
        return 2
    diagnostics = validate(config)
    for diagnostic in diagnostics:
        print(f"[error] {diagnostic}", file=sys.stderr)
    if diagnostics:
        return 2
    print(f"[validate] OK ({config.experiment})")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    if args.tol is not None:
        if not args.tol > 0.0:
            raise ConfigError("must be positive", path="tol")
        set_tolerances(replace(get_tolerances(), certificate=args.tol))
    diagnostics = validate(config)
    if diagnostics:
        for diagnostic in diagnostics:
            print(f"[error] {diagnostic}", file=sys.stderr)
        return 2

    report = run(config, jobs=args.jobs)
    if not args.no_write:
        written = report.write(Path(config.out) if config.out is not None else DEFAULT_OUT)
        for path in written:
            logger.info("wrote %s", path)
        print(f"[{report.experiment}] report: {written[0]}")

    summary = " ".join(f"{verdict}={count}" for verdict, count in report.summary.items())
    status = "FAIL" if report.failed else "OK"
    print(f"[{report.experiment}] {status} ({summary})")
    for record in report.failures():
        print(f"  - {record.name}: lhs={record.lhs} rhs={record.rhs}")
        print(f"    reproduce: {record.reproduce}")
    return report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    if args.command == "list":
        return _cmd_list(args)
    if args.command == "validate":
        return _cmd_validate(args)
    try:
        return _cmd_run(args)
    except (ConfigError, PreconditionError, SizeGuardError) as err:
        print(f"[error] {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
