"""
Contract tests for the report files.

Readers of results/ rely on the JSON keys, the CSV header and the
<experiment>.<table>.csv naming. Numbers are not asserted here.
"""

from __future__ import annotations

import csv
import json

import pytest

from stein_lab.divergences import Infinity
from stein_lab.harness import CSV_COLUMNS, Report, environment_fingerprint
from stein_lab.verdicts import inapplicable, inequality


pytestmark = [
    pytest.mark.contract,
    pytest.mark.domain,
]

REPORT_KEYS = {"experiment", "params", "checks", "environment", "summary", "tables"}
CHECK_KEYS = {"name", "verdict", "lhs", "rhs", "slack", "terms", "certificates", "detail", "runtime_s"}


@pytest.fixture
def report() -> Report:
    failing = inequality("b", 3.0, 2.0, tol=0.0).with_reproduce("stein-lab axioms --seed 1 --tol 1e-08")
    return Report(
        experiment="axioms",
        checks=(inequality("a", 1.0, Infinity.POSITIVE), failing, inapplicable("c", "skipped")),
        environment=environment_fingerprint(1),
        params={"product_max_level": 3},
        tables={"axioms": [{"family": "product", "A1": 0.0}], "empty": []},
    )


def test_json_shape(report, tmp_path):
    json_path, _ = report.write(tmp_path)[:2]
    assert json_path == tmp_path / "axioms.json"
    data = json.loads(json_path.read_text(encoding="utf-8"))
    assert set(data) == REPORT_KEYS
    for check in data["checks"]:
        assert CHECK_KEYS <= set(check)
        assert check["verdict"] in {"pass", "fail", "inconclusive", "inapplicable"}
    assert "reproduce" in data["checks"][1]
    assert "reproduce" not in data["checks"][0]
    assert set(data["summary"]) == {"pass", "fail", "inconclusive", "inapplicable"}


def test_csv_header_and_rows(report, tmp_path):
    paths = report.write(tmp_path)
    with paths[1].open(encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [row["name"] for row in rows] == ["a", "b", "c"]
    assert rows[0]["rhs"] == "+inf"


def test_tables_are_written_beside_the_report(report, tmp_path):
    paths = report.write(tmp_path / "out")
    names = sorted(p.name for p in paths)
    assert names == ["axioms.axioms.csv", "axioms.csv", "axioms.json"]


def test_explicit_json_path(report, tmp_path):
    paths = report.write(tmp_path / "nested" / "run.json")
    assert paths[0] == tmp_path / "nested" / "run.json"
    assert paths[1] == tmp_path / "nested" / "run.csv"
    assert (tmp_path / "nested" / "run.axioms.csv").exists()
