"""
Parameter validators for experiment configurations.

A validator takes the raw JSON value and returns None when it is
acceptable, else a one-line message. Messages for module preconditions
repeat the wording the module itself raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Any, Callable, Optional

Validator = Callable[[Any], Optional[str]]

DISTRIBUTION_TOL = 1e-9


@dataclass(frozen=True)
class Diagnostic:
    """One invalid field; path is dotted from the config root (params.delta, inputs.family)."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"

    def to_dict(self) -> dict[str, str]:
        return {"path": self.path, "message": self.message}


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool) and math.isfinite(float(value))


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def half_interval(label: str) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not _is_number(value) or not 0.0 < float(value) <= 0.5:
            return f"{label} must be in (0, 1/2]"
        return None

    return check


def open_unit(label: str) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not _is_number(value) or not 0.0 < float(value) < 1.0:
            return f"{label} must lie in (0, 1)"
        return None

    return check


def integer(min_value: int = 0, max_value: Optional[int] = None) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not _is_int(value):
            return f"expected an integer, got {value!r}"
        if value < min_value:
            return f"must be at least {min_value}"
        if max_value is not None and value > max_value:
            return f"must be at most {max_value}"
        return None

    return check


def number(low: float = -math.inf, high: float = math.inf) -> Validator:
    """Finite number in the closed interval [low, high]."""

    def check(value: Any) -> Optional[str]:
        if not _is_number(value):
            return f"expected a number, got {value!r}"
        if not low <= float(value) <= high:
            return f"must lie in [{low:g}, {high:g}]"
        return None

    return check


def ascending_ints(min_value: int = 1) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not isinstance(value, list) or not value or not all(_is_int(v) for v in value):
            return "expected a nonempty list of integers"
        if value[0] < min_value:
            return f"entries must be at least {min_value}"
        if any(b <= a for a, b in zip(value, value[1:])):
            return "must be strictly ascending"
        return None

    return check


def int_list(min_value: int = 0, length: Optional[int] = None) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not isinstance(value, list) or not value or not all(_is_int(v) for v in value):
            return "expected a nonempty list of integers"
        if any(v < min_value for v in value):
            return f"entries must be at least {min_value}"
        if length is not None and len(value) != length:
            return f"expected {length} entries, got {len(value)}"
        return None

    return check


def nonnegative_grid(value: Any) -> Optional[str]:
    if not isinstance(value, list) or not value or not all(_is_number(v) for v in value):
        return "expected a nonempty list of numbers"
    if any(float(v) < 0.0 for v in value):
        return "entries must be nonnegative"
    return None


def distribution(value: Any) -> Optional[str]:
    if not isinstance(value, list) or len(value) < 2 or not all(_is_number(v) for v in value):
        return "expected a list of at least two probabilities"
    if any(float(v) < 0.0 for v in value):
        return "probabilities must be nonnegative"
    if abs(sum(float(v) for v in value) - 1.0) > DISTRIBUTION_TOL:
        return "probabilities must sum to 1"
    return None


def distributions(value: Any) -> Optional[str]:
    if not isinstance(value, list) or not value:
        return "expected a nonempty list of distributions"
    for i, item in enumerate(value):
        message = distribution(item)
        if message is not None:
            return f"[{i}] {message}"
    if len({len(item) for item in value}) != 1:
        return "distributions have different lengths"
    return None


def optional(inner: Validator) -> Validator:
    def check(value: Any) -> Optional[str]:
        return None if value is None else inner(value)

    return check


def list_of(inner: Validator) -> Validator:
    def check(value: Any) -> Optional[str]:
        if not isinstance(value, list) or not value:
            return "expected a nonempty list"
        for i, item in enumerate(value):
            message = inner(item)
            if message is not None:
                return f"[{i}] {message}"
        return None

    return check
