"""
Frank-Wolfe over the probability simplex.

frank_wolfe_simplex minimises a smooth convex function with exact line
search and reports the linearisation gap.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from stein_lab.config import get_tolerances

logger = logging.getLogger(__name__)

LINE_SEARCH_XATOL = 1e-12
# stand-in for +inf inside line searches; never returned to callers
_HUGE = 1e300


@dataclass(frozen=True)
class FrankWolfeOutcome:
    weights: np.ndarray
    value: float
    gap: float
    iterations: int
    converged: bool


def _line_search(objective: Callable[[np.ndarray], float], w: np.ndarray, direction: np.ndarray, max_step: float) -> float:
    def along(gamma: float) -> float:
        value = objective(w + gamma * direction)
        return value if math.isfinite(value) else _HUGE

    found = minimize_scalar(along, bounds=(0.0, max_step), method="bounded", options={"xatol": LINE_SEARCH_XATOL})
    gamma = float(found.x)
    # the bounded method never evaluates the endpoints themselves
    best = min((along(0.0), 0.0), (along(gamma), gamma), (along(max_step), max_step))
    return best[1]


def frank_wolfe_simplex(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    initial: np.ndarray,
    *,
    gap_tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    away_steps: bool = False,
) -> FrankWolfeOutcome:
    tol = get_tolerances()
    gap_tol = tol.fw_gap if gap_tol is None else gap_tol
    max_iter = tol.fw_max_iter if max_iter is None else max_iter

    w = np.asarray(initial, dtype=float).copy()
    gap = math.inf
    iteration = 0
    for iteration in range(1, max_iter + 1):
        grad = gradient(w)
        s = int(np.argmin(grad))
        gap = float(grad @ w - grad[s])
        if gap <= gap_tol:
            break

        toward = -w.copy()
        toward[s] += 1.0
        direction, max_step = toward, 1.0
        if away_steps:
            active = np.flatnonzero(w > 0.0)
            a = int(active[np.argmax(grad[active])])
            away_gain = float(grad[a] - grad @ w)
            if away_gain > gap and w[a] < 1.0:
                direction = w.copy()
                direction[a] -= 1.0
                max_step = w[a] / (1.0 - w[a])

        gamma = _line_search(objective, w, direction, max_step)
        if gamma <= 0.0:
            break
        w = w + gamma * direction
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        if iteration % 100 == 0:
            logger.debug("frank_wolfe iteration=%d gap=%.3e", iteration, gap)

    value = objective(w)
    return FrankWolfeOutcome(weights=w, value=value, gap=max(gap, 0.0), iterations=iteration, converged=gap <= gap_tol)

