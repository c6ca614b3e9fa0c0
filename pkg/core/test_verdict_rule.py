"""
Core tests for the verdict rule and CheckRecord.

Every lemma check in the library is decided here, so these invariants
are the ones a report reader relies on.
"""

from __future__ import annotations

import math
from dataclasses import FrozenInstanceError

import pytest

from stein_lab.divergences import DivergenceResult, Infinity
from stein_lab.verdicts import CheckRecord, Verdict, decide, inapplicable, inequality


# ============================================================
# MARKERS
# ============================================================

pytestmark = [
    pytest.mark.unit,
    pytest.mark.core,
]


# ============================================================
# DECISION RULE
# ============================================================

def test_pass_when_lhs_below_rhs_within_tolerance():
    """
    Invariant:
    lhs_hi <= rhs_lo + tol is PASS, including equality up to tol.
    """
    assert decide(1.0, 2.0, tol=0.0) is Verdict.PASS
    assert decide(1.0 + 1e-9, 1.0, tol=1e-8) is Verdict.PASS


def test_fail_requires_certified_violation():
    """
    Invariant:
    FAIL only when lhs_lo exceeds rhs_hi by more than tol.
    """
    assert decide(2.0, 1.0, tol=0.5) is Verdict.FAIL
    assert decide(1.4, 1.0, tol=0.5) is Verdict.PASS


def test_overlapping_enclosures_are_inconclusive():
    """
    Invariant:
    overlapping enclosures cannot be decided either way.
    """
    assert decide((0.9, 1.2), (1.0, 1.1), tol=0.0) is Verdict.INCONCLUSIVE


def test_infinite_rhs_always_passes():
    """
    Invariant:
    anything is below +inf, including +inf itself.
    """
    assert decide(5.0, Infinity.POSITIVE) is Verdict.PASS
    assert decide(Infinity.POSITIVE, Infinity.POSITIVE) is Verdict.PASS


def test_infinite_lhs_against_finite_rhs_fails():
    assert decide(Infinity.POSITIVE, 3.0, tol=1e-8) is Verdict.FAIL


def test_divergence_result_bracket_is_used():
    """
    Invariant:
    a DivergenceResult contributes its certified bracket, not its point value.
    """
    result = DivergenceResult(value=1.0, bracket=(0.9, 1.1))
    assert decide(result, 1.05, tol=0.0) is Verdict.INCONCLUSIVE
    assert decide(result, 1.2, tol=0.0) is Verdict.PASS


# ============================================================
# RECORDS
# ============================================================

def test_inequality_records_upper_lhs_and_lower_rhs():
    record = inequality("x", (1.0, 2.0), (3.0, 4.0), tol=0.0)
    assert record.lhs == 2.0
    assert record.rhs == 3.0
    assert record.slack == pytest.approx(1.0)
    assert record.verdict is Verdict.PASS


def test_slack_is_infinite_for_infinite_rhs():
    record = inequality("x", 1.0, Infinity.POSITIVE)
    assert record.rhs is Infinity.POSITIVE
    assert math.isinf(record.slack)


def test_record_is_frozen():
    record = inequality("x", 0.0, 1.0)
    with pytest.raises(FrozenInstanceError):
        record.verdict = Verdict.FAIL


def test_inapplicable_carries_detail_and_terms():
    record = inapplicable("lemma", "n below threshold", n=3)
    assert record.verdict is Verdict.INAPPLICABLE
    assert record.detail == "n below threshold"
    assert record.terms == {"n": 3}


def test_to_dict_is_json_ready():
    """
    Invariant:
    +inf is serialized as the string "+inf", reproduce only when set.
    """
    record = inequality("x", 1.0, Infinity.POSITIVE, terms={"t": float("inf")})
    data = record.to_dict()
    assert data["rhs"] == "+inf"
    assert data["slack"] == "+inf"
    assert data["terms"]["t"] == "+inf"
    assert "reproduce" not in data

    data = record.with_reproduce("stein-lab axioms --seed 1").with_runtime(0.5).to_dict()
    assert data["reproduce"] == "stein-lab axioms --seed 1"
    assert data["runtime_s"] == 0.5


def test_check_record_defaults():
    record = CheckRecord(name="bare", verdict=Verdict.PASS)
    assert record.lhs == 0.0 and record.rhs == 0.0
    assert record.reproduce is None
