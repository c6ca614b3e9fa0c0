"""
Validators for the five free-set axioms.

    A1  convex and closed            true for every finite hull
    A2  a full-rank free state       c > 0 at level 1
    A3  closed under partial traces  Tr_last(level n+1) inside hull(level n)
    A4  closed under tensor products level a ⊗ level b inside hull(level a+b)
    A5  closed under permutations    U_pi sigma U_pi^dagger inside hull(level n), n <= 4

Failures are report entries carrying residuals, never exceptions.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.free_sets.family import FreeFamily, full_rank_constant
from stein_lab.free_sets.membership import hull_distance
from stein_lab.linalg.tensor import permute_operator, tensor, trace_out_last

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-6
PERMUTATION_MAX_LEVEL = 4


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: Optional[bool]
    residual: float
    detail: str = ""

    @property
    def skipped(self) -> bool:
        return self.passed is None

    def to_dict(self) -> dict[str, Any]:
        return {"axiom": self.axiom, "passed": self.passed, "residual": self.residual, "detail": self.detail}


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]
    c: float
    rule: str
    inner_approximation: bool = False
    levels: tuple[int, ...] = field(default_factory=tuple)

    def by_axiom(self) -> dict[str, AxiomCheck]:
        return {c.axiom: c for c in self.checks}

    @property
    def all_passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def failed(self) -> list[str]:
        return [c.axiom for c in self.checks if c.passed is False]

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "c": self.c,
            "inner_approximation": self.inner_approximation,
            "levels": list(self.levels),
            "checks": [c.to_dict() for c in self.checks],
        }


def _worst_distance(targets: Iterable[np.ndarray], generators: tuple[np.ndarray, ...]) -> float:
    worst = 0.0
    for target in targets:
        worst = max(worst, hull_distance(target, generators).distance)
    return worst


def _check_full_rank(family: FreeFamily) -> AxiomCheck:
    if 1 not in family.levels:
        return AxiomCheck("A2", None, 0.0, "no level 1")
    gens = family.levels[1]
    weights = np.full(len(gens), 1.0 / len(gens)) if family.reference is None else family.reference
    c = full_rank_constant(gens, weights)
    eigenvalues = np.linalg.eigvalsh(np.tensordot(weights, np.stack(gens), axes=1))
    # fraction of the space the designated mixture misses
    deficiency = float(np.mean(eigenvalues < get_tolerances().support))
    passed = c > get_tolerances().support
    return AxiomCheck("A2", passed, 0.0 if passed else deficiency, f"c={c:.6e}")


def _check_partial_traces(family: FreeFamily, levels: list[int]) -> AxiomCheck:
    pairs = [n for n in levels if n + 1 in family.levels and n in family.levels]
    if not pairs:
        return AxiomCheck("A3", None, 0.0, "no consecutive levels")
    d = family.dim
    worst = 0.0
    for n in pairs:
        reduced = (trace_out_last(g, d, n + 1, 1) for g in family.levels[n + 1])
        worst = max(worst, _worst_distance(reduced, family.levels[n]))
    return AxiomCheck("A3", worst <= MEMBERSHIP_TOL, worst, f"levels {pairs}")


def _check_tensor_products(family: FreeFamily, levels: list[int]) -> AxiomCheck:
    present = sorted(set(levels) & set(family.levels))
    pairs = [(a, b) for a in present for b in present if a <= b and a + b in family.levels]
    if not pairs:
        return AxiomCheck("A4", None, 0.0, "no level a+b available")
    worst = 0.0
    for a, b in pairs:
        products = (tensor(x, y) for x in family.levels[a] for y in family.levels[b])
        worst = max(worst, _worst_distance(products, family.levels[a + b]))
        if a != b:
            products = (tensor(y, x) for x in family.levels[a] for y in family.levels[b])
            worst = max(worst, _worst_distance(products, family.levels[a + b]))
    return AxiomCheck("A4", worst <= MEMBERSHIP_TOL, worst, f"pairs {pairs}")


def _check_permutations(family: FreeFamily, levels: list[int]) -> AxiomCheck:
    checked = [n for n in levels if n in family.levels and 2 <= n <= PERMUTATION_MAX_LEVEL]
    if not checked:
        return AxiomCheck("A5", True, 0.0, "no level with n in [2, 4]")
    worst = 0.0
    for n in checked:
        gens = family.levels[n]
        for perm in itertools.permutations(range(n)):
            if list(perm) == list(range(n)):
                continue
            permuted = (permute_operator(g, family.dim, perm) for g in gens)
            worst = max(worst, _worst_distance(permuted, gens))
    return AxiomCheck("A5", worst <= MEMBERSHIP_TOL, worst, f"levels {checked}")


def check_axioms(family: FreeFamily, levels_to_check: Optional[Iterable[int]] = None) -> AxiomReport:
    levels = sorted(family.levels) if levels_to_check is None else sorted(set(levels_to_check))
    checks = (
        AxiomCheck("A1", True, 0.0, "finite hulls are convex and closed"),
        _check_full_rank(family),
        _check_partial_traces(family, levels),
        _check_tensor_products(family, levels),
        _check_permutations(family, levels),
    )
    for check in checks:
        if check.passed is False:
            logger.info("axiom_failed axiom=%s residual=%.3e %s", check.axiom, check.residual, check.detail)
    return AxiomReport(
        checks=checks,
        c=family.c,
        rule=family.rule.value,
        inner_approximation=family.inner_approximation,
        levels=tuple(levels),
    )
