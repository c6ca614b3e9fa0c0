"""
Result carriers for divergence computations.

+∞ is the explicit marker Infinity.POSITIVE, never a float sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np

from stein_lab.errors import ValidationError
from stein_lab.linalg.operators import matrix_to_json

DISTRIBUTION_SUM_TOL = 1e-12


class Infinity(Enum):
    POSITIVE = "+inf"

    def __str__(self) -> str:
        return self.value


Value = Union[float, Infinity]


def is_infinite(value: Value) -> bool:
    return value is Infinity.POSITIVE


def as_float(value: Value) -> float:
    return math.inf if is_infinite(value) else float(value)


def value_to_json(value: Value) -> Union[float, str]:
    return Infinity.POSITIVE.value if is_infinite(value) else float(value)


# ---------------------------------------------------------------------
# CLASSICAL DISTRIBUTIONS
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalDistribution:
    """Probability vector over labels 0..size-1; subnormalised only when flagged."""

    weights: np.ndarray
    subnormalized: bool = False

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        if w.size == 0:
            raise ValidationError("empty distribution", field="weights")
        if np.any(w < 0):
            raise ValidationError("negative weight", field="weights", residual=float(-w.min()))
        total = float(w.sum())
        if self.subnormalized:
            if total > 1.0 + DISTRIBUTION_SUM_TOL:
                raise ValidationError("subnormalised weights exceed 1", field="weights", residual=total - 1.0)
        elif abs(total - 1.0) > DISTRIBUTION_SUM_TOL:
            raise ValidationError(f"weights sum to {total!r}", field="weights", residual=abs(total - 1.0))
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, size: int) -> "ClassicalDistribution":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "ClassicalDistribution":
        w = np.asarray(weights, dtype=float)
        return cls(w / w.sum())

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def as_operator(self) -> np.ndarray:
        return np.diag(self.weights).astype(complex)

    def total_variation(self, other: "ClassicalDistribution") -> float:
        if other.size != self.size:
            raise ValidationError("label spaces differ", field="other")
        return 0.5 * float(np.sum(np.abs(self.weights - other.weights)))

    def to_dict(self) -> dict[str, Any]:
        return {"size": self.size, "weights": self.weights.tolist(), "subnormalized": self.subnormalized}


# ---------------------------------------------------------------------
# RESULTS
# ---------------------------------------------------------------------

def _json_witness(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        if value.ndim == 2 and value.shape[0] == value.shape[1] and np.iscomplexobj(value):
            return matrix_to_json(value)
        return np.real_if_close(value).tolist() if np.iscomplexobj(value) else value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, Infinity):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_json_witness(v) for v in value]
    return value


@dataclass(frozen=True)
class DivergenceResult:
    """
    value: optimum (or best certified upper value when approximate).
    bracket: certified (lower, upper) enclosure of the true optimum.
    witness: optimiser data (test Q, weights, smoothed p', threshold, ...).
    certificate: duality gaps and feasibility residuals.
    """

    value: Value
    witness: Optional[Mapping[str, Any]] = None
    certificate: Mapping[str, float] = field(default_factory=dict)
    approximate: bool = False
    bracket: Optional[tuple[Value, Value]] = None

    @property
    def infinite(self) -> bool:
        return is_infinite(self.value)

    def as_float(self) -> float:
        return as_float(self.value)

    @property
    def lower(self) -> float:
        return as_float(self.bracket[0]) if self.bracket is not None else self.as_float()

    @property
    def upper(self) -> float:
        return as_float(self.bracket[1]) if self.bracket is not None else self.as_float()

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "value": value_to_json(self.value),
            "infinite": self.infinite,
            "certificate": {k: float(v) for k, v in self.certificate.items()},
            "approximate": self.approximate,
        }
        if self.bracket is not None:
            data["bracket"] = [value_to_json(self.bracket[0]), value_to_json(self.bracket[1])]
        if self.witness is not None:
            data["witness"] = {k: _json_witness(v) for k, v in self.witness.items()}
        return data
