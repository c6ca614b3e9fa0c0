"""
Free-set families: level n is the convex hull of a finite list of states
on (C^d)^{⊗n}.

Closedness of each level is automatic for finite hulls, so the general
closed convex sets of the axioms are representable only through their
generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import ConfigError, PreconditionError, ValidationError
from stein_lab.linalg.operators import as_matrix, matrix_from_json, matrix_to_json, require_state


class ConstructionRule(str, Enum):
    PRODUCT = "product-of-generators"
    EXPLICIT = "explicit"
    SAMPLED_SEP = "sampled-SEP"


def full_rank_constant(generators: Sequence[np.ndarray], reference: Optional[np.ndarray] = None) -> float:
    """lambda_min of the designated mixture (uniform unless reference weights are given), clipped at 0."""
    stack = np.stack(generators)
    weights = np.full(len(generators), 1.0 / len(generators)) if reference is None else np.asarray(reference, dtype=float)
    sigma0 = np.tensordot(weights, stack, axes=1)
    return max(0.0, float(np.linalg.eigvalsh((sigma0 + sigma0.conj().T) / 2)[0]))


@dataclass(frozen=True)
class FreeFamily:
    """
    dim is the single-system dimension d; levels[n] holds generators on d^n.

    reference holds the level-1 weights of the designated full-rank
    mixture sigma_0, and c its smallest eigenvalue.
    """

    dim: int
    levels: Mapping[int, tuple[np.ndarray, ...]]
    rule: ConstructionRule
    c: float
    reference: Optional[np.ndarray] = None
    seed: Optional[int] = None
    inner_approximation: bool = False
    raw_counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValidationError("single-system dimension must be positive", field="dim")
        frozen: dict[int, tuple[np.ndarray, ...]] = {}
        for n, gens in sorted(self.levels.items()):
            if not gens:
                raise ValidationError(f"level {n} has no generators", field=f"levels.{n}")
            mats = []
            for i, g in enumerate(gens):
                m = require_state(as_matrix(g), f"levels.{n}[{i}]")
                if m.shape[0] != self.dim ** n:
                    raise ValidationError(f"generator has dim {m.shape[0]}, expected {self.dim}^{n}", field=f"levels.{n}[{i}]")
                m = m.copy()
                m.setflags(write=False)
                mats.append(m)
            frozen[int(n)] = tuple(mats)
        object.__setattr__(self, "levels", frozen)

    @property
    def max_level(self) -> int:
        return max(self.levels)

    def generators(self, n: int) -> tuple[np.ndarray, ...]:
        if n not in self.levels:
            raise PreconditionError(f"family has no level {n} (levels {sorted(self.levels)})")
        return self.levels[n]

    def is_classical(self, tol: float | None = None) -> bool:
        tol = get_tolerances().hermitian if tol is None else tol
        return all(
            float(np.max(np.abs(g - np.diag(np.diag(g))))) <= tol
            for gens in self.levels.values()
            for g in gens
        )

    def diagonal_generators(self, n: int) -> list[np.ndarray]:
        """Level-n generators as probability vectors; requires a classical family."""
        if not self.is_classical():
            raise PreconditionError("family is not classical (off-diagonal generators)")
        return [np.clip(np.diag(g).real, 0.0, None) for g in self.generators(n)]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "dim": self.dim,
            "rule": self.rule.value,
            "levels": {str(n): [matrix_to_json(g) for g in gens] for n, gens in self.levels.items()},
        }
        if self.seed is not None:
            data["seed"] = self.seed
        if self.reference is not None:
            data["reference"] = [float(x) for x in self.reference]
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FreeFamily":
        try:
            dim = int(data["dim"])
            rule = ConstructionRule(data.get("rule", ConstructionRule.EXPLICIT.value))
            levels = {int(n): tuple(matrix_from_json(m) for m in mats) for n, mats in data["levels"].items()}
        except KeyError as exc:
            raise ConfigError(f"missing key {exc.args[0]!r}", path="family") from exc
        except ValueError as exc:
            raise ConfigError(str(exc), path="family") from exc
        reference = np.asarray(data["reference"], dtype=float) if "reference" in data else None
        c = full_rank_constant(levels[1], reference) if 1 in levels else 0.0
        return cls(
            dim=dim,
            levels=levels,
            rule=rule,
            c=c,
            reference=reference,
            seed=data.get("seed"),
            inner_approximation=rule is ConstructionRule.SAMPLED_SEP,
        )

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FreeFamily":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(exc), path=str(path)) from exc
        return cls.from_dict(data)

