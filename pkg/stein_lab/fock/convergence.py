"""Trace-norm distance between the lifted blurring map and its limit along a grid of n."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from stein_lab.errors import ValidationError
from stein_lab.fock.lift import lifted_blur
from stein_lab.fock.limit import limit_operator
from stein_lab.fock.operators import FockOperator
from stein_lab.verdicts import CheckRecord, Verdict, inequality

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.05
EXACT_FLOOR = 1e-12


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    error: float
    runtime_s: float


@dataclass(frozen=True)
class ConvergenceStudy:
    h: tuple[int, ...]
    k: tuple[int, ...]
    delta: float
    threshold: float
    rows: tuple[ConvergenceRow, ...]

    @property
    def errors(self) -> list[float]:
        return [row.error for row in self.rows]

    def records(self) -> list[CheckRecord]:
        """e_{n_max} < e_{n_min} (or both vanish) and e_{n_max} below the threshold."""
        label = f"h={list(self.h)} k={list(self.k)} delta={self.delta:g}"
        first, last = self.rows[0], self.rows[-1]
        # strict decrease, unless the map is exact at every n
        exact = max(first.error, last.error) <= EXACT_FLOOR
        decrease = CheckRecord(
            name="fock_convergence_decreasing",
            verdict=Verdict.PASS if exact or last.error < first.error else Verdict.FAIL,
            lhs=last.error,
            rhs=first.error,
            terms={"n_min": first.n, "n_max": last.n, "errors": self.errors},
            detail=label,
        )
        below = inequality(
            "fock_convergence_threshold",
            last.error,
            self.threshold,
            terms={"n_max": last.n},
            detail=label,
            tol=0.0,
        )
        return [decrease, below]

    def to_rows(self) -> list[dict[str, Any]]:
        return [{"n": row.n, "error": row.error, "runtime_s": row.runtime_s} for row in self.rows]


def convergence_study(
    h: Sequence[int],
    k: Sequence[int],
    delta: float,
    n_grid: Sequence[int],
    *,
    cutoff: Optional[int] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> ConvergenceStudy:
    """e_n = ||lifted_blur(n, delta, |h><k|) - limit_operator(h, k, delta)||_1 for n in n_grid."""
    grid = [int(n) for n in n_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"n grid must be strictly ascending, got {grid}", field="n_grid")
    h, k = tuple(int(x) for x in h), tuple(int(x) for x in k)
    cutoff = max(max(h), max(k)) if cutoff is None else cutoff
    target = limit_operator(h, k, delta, cutoff)
    rows = []
    for n in grid:
        if sum(h) > n or sum(k) > n:
            raise ValidationError(f"occupations {h}, {k} exceed n={n}", field="n_grid")
        started = time.perf_counter()
        blurred = lifted_blur(n, delta, FockOperator.ketbra(h, k, cutoff))
        error = (blurred - target).trace_norm()
        rows.append(ConvergenceRow(n, error, time.perf_counter() - started))
        logger.debug("fock_convergence n=%d error=%.3e", n, error)
    return ConvergenceStudy(h, k, float(delta), float(threshold), tuple(rows))
