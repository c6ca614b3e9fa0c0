"""
Check records and the verdict rule shared by every lemma check.

An inequality lhs <= rhs is decided on certified enclosures:

    PASS          lhs_upper <= rhs_lower + tol
    FAIL          lhs_lower  > rhs_upper + tol
    INCONCLUSIVE  otherwise
    INAPPLICABLE  the lemma's hypothesis does not hold for the instance
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping, Optional, Union

from stein_lab.config import get_tolerances
from stein_lab.divergences.result import DivergenceResult, Infinity, Value, as_float, value_to_json


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    INAPPLICABLE = "inapplicable"


Bound = Union[Value, DivergenceResult, tuple[Value, Value]]


def enclosure(x: Bound) -> tuple[float, float]:
    """(lower, upper) as floats, +inf for Infinity."""
    if isinstance(x, DivergenceResult):
        return x.lower, x.upper
    if isinstance(x, tuple):
        return as_float(x[0]), as_float(x[1])
    v = as_float(x)
    return v, v


def decide(lhs: Bound, rhs: Bound, tol: Optional[float] = None) -> Verdict:
    tol = get_tolerances().certificate if tol is None else tol
    lhs_lo, lhs_hi = enclosure(lhs)
    rhs_lo, rhs_hi = enclosure(rhs)
    if math.isinf(rhs_lo) and rhs_lo > 0:
        return Verdict.PASS
    if lhs_hi <= rhs_lo + tol:
        return Verdict.PASS
    if lhs_lo > rhs_hi + tol:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


def _json_number(x: Any) -> Any:
    if isinstance(x, Infinity):
        return x.value
    if isinstance(x, float) and math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    if isinstance(x, float) and math.isnan(x):
        return None
    return x


@dataclass(frozen=True)
class CheckRecord:
    name: str
    verdict: Verdict
    lhs: Value = 0.0
    rhs: Value = 0.0
    terms: Mapping[str, Any] = field(default_factory=dict)
    certificates: Mapping[str, float] = field(default_factory=dict)
    detail: str = ""
    runtime_s: float = 0.0
    reproduce: Optional[str] = None

    @property
    def slack(self) -> float:
        """rhs - lhs; +inf when the right side is infinite."""
        lhs, rhs = as_float(self.lhs), as_float(self.rhs)
        if math.isinf(rhs) and math.isinf(lhs):
            return 0.0 if rhs == lhs else -math.inf
        return rhs - lhs

    def with_runtime(self, seconds: float) -> "CheckRecord":
        return replace(self, runtime_s=seconds)

    def with_reproduce(self, command: str) -> "CheckRecord":
        return replace(self, reproduce=command)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "name": self.name,
            "verdict": self.verdict.value,
            "lhs": value_to_json(self.lhs),
            "rhs": value_to_json(self.rhs),
            "slack": _json_number(self.slack),
            "terms": {k: _json_number(value_to_json(v) if isinstance(v, (Infinity, float, int)) else v) for k, v in self.terms.items()},
            "certificates": {k: _json_number(float(v)) for k, v in self.certificates.items()},
            "detail": self.detail,
            "runtime_s": self.runtime_s,
        }
        if self.reproduce is not None:
            data["reproduce"] = self.reproduce
        return data


def inequality(
    name: str,
    lhs: Bound,
    rhs: Bound,
    *,
    terms: Optional[Mapping[str, Any]] = None,
    certificates: Optional[Mapping[str, float]] = None,
    detail: str = "",
    tol: Optional[float] = None,
) -> CheckRecord:
    """Record for lhs <= rhs, valued at the upper end of lhs and the lower end of rhs."""
    lhs_value = _point(lhs, upper=True)
    rhs_value = _point(rhs, upper=False)
    return CheckRecord(
        name=name,
        verdict=decide(lhs, rhs, tol),
        lhs=lhs_value,
        rhs=rhs_value,
        terms=dict(terms or {}),
        certificates=dict(certificates or {}),
        detail=detail,
    )


def inapplicable(name: str, detail: str, **terms: Any) -> CheckRecord:
    return CheckRecord(name=name, verdict=Verdict.INAPPLICABLE, terms=terms, detail=detail)


def _point(x: Bound, *, upper: bool) -> Value:
    lo, hi = enclosure(x)
    v = hi if upper else lo
    return Infinity.POSITIVE if math.isinf(v) and v > 0 else v
