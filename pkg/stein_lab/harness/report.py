"""
Report assembly: one JSON document per run plus a flat CSV of check rows.

Sweep tables (convergence rows, trend tables) are written next to the
report as <experiment>.<table>.csv.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import shlex
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import numpy as np
import scipy

from stein_lab import __version__
from stein_lab.config import Tolerances, get_tolerances
from stein_lab.divergences.result import Infinity, value_to_json
from stein_lab.verdicts import CheckRecord, Verdict

CSV_COLUMNS = ("experiment", "name", "lhs", "rhs", "slack", "verdict", "runtime_s")
PROGRAM = "stein-lab"


def jsonable(value: Any) -> Any:
    """Recursively turn numpy scalars/arrays, enums and non-finite floats into JSON values."""
    if isinstance(value, Infinity):
        return value.value
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.generic):
        return jsonable(value.item())
    if isinstance(value, complex):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
    if hasattr(value, "to_dict"):
        return jsonable(value.to_dict())
    return value


def environment_fingerprint(seed: int, tolerances: Optional[Tolerances] = None) -> dict[str, Any]:
    tolerances = get_tolerances() if tolerances is None else tolerances
    return {
        "seed": seed,
        "version": __version__,
        "tolerances": tolerances.to_dict(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def reproduce_command(
    experiment: str,
    seed: int,
    tol: float,
    overrides: Optional[Mapping[str, Any]] = None,
    inputs: Optional[Mapping[str, str]] = None,
) -> str:
    """CLI line that re-runs an experiment with the same seed, tolerance and parameters."""
    parts = [PROGRAM, experiment, "--seed", str(seed), "--tol", repr(float(tol))]
    for key, value in sorted((overrides or {}).items()):
        parts += ["--set", f"{key}={json.dumps(jsonable(value), separators=(',', ':'))}"]
    for key, path in sorted((inputs or {}).items()):
        parts += ["--input", f"{key}={path}"]
    return shlex.join(parts)


@dataclass(frozen=True)
class Report:
    experiment: str
    checks: tuple[CheckRecord, ...]
    environment: Mapping[str, Any]
    params: Mapping[str, Any] = field(default_factory=dict)
    tables: Mapping[str, Sequence[Mapping[str, Any]]] = field(default_factory=dict)

    @property
    def summary(self) -> dict[str, int]:
        counts = {verdict.value: 0 for verdict in Verdict}
        for record in self.checks:
            counts[record.verdict.value] += 1
        return counts

    @property
    def failed(self) -> bool:
        return any(record.verdict is Verdict.FAIL for record in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def failures(self) -> list[CheckRecord]:
        return [record for record in self.checks if record.verdict is Verdict.FAIL]

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "params": jsonable(self.params),
            "checks": [jsonable(record.to_dict()) for record in self.checks],
            "environment": jsonable(self.environment),
            "summary": self.summary,
            "tables": {name: [jsonable(row) for row in rows] for name, rows in self.tables.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def csv_rows(self) -> list[dict[str, Any]]:
        rows = []
        for record in self.checks:
            data = record.to_dict()
            rows.append(
                {
                    "experiment": self.experiment,
                    "name": record.name,
                    "lhs": value_to_json(record.lhs),
                    "rhs": value_to_json(record.rhs),
                    "slack": jsonable(data["slack"]),
                    "verdict": record.verdict.value,
                    "runtime_s": record.runtime_s,
                }
            )
        return rows

    def write(self, out: Path | str) -> list[Path]:
        """
        out ending in .json names the report file; anything else is a
        directory that receives <experiment>.json and <experiment>.csv.
        """
        out = Path(out)
        if out.suffix == ".json":
            json_path = out
        else:
            json_path = out / f"{self.experiment}.json"
        json_path.parent.mkdir(parents=True, exist_ok=True)
        json_path.write_text(self.to_json(), encoding="utf-8")

        csv_path = json_path.with_suffix(".csv")
        write_csv(csv_path, CSV_COLUMNS, self.csv_rows())
        written = [json_path, csv_path]
        for name, rows in self.tables.items():
            if not rows:
                continue
            table_path = json_path.with_name(f"{json_path.stem}.{name}.csv")
            write_csv(table_path, tuple(rows[0].keys()), [jsonable(row) for row in rows])
            written.append(table_path)
        return written


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in columns})


def _cell(value: Any) -> Any:
    value = jsonable(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return "" if value is None else value
