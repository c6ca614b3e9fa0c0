"""
Distance from an operator to the convex hull of generators.

min_w || tau - sum_i w_i sigma_i ||_2 over the probability simplex, solved
as a small quadratic program by accelerated projected gradient on the Gram
matrix. Vertices are checked first so exact members come out at rounding
level.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from stein_lab.errors import ValidationError
from stein_lab.linalg.operators import OperatorLike, as_matrix

logger = logging.getLogger(__name__)

HULL_DISTANCE_TOL = 1e-8
_MAX_ITER = 20_000


@dataclass(frozen=True)
class HullDistance:
    distance: float
    weights: np.ndarray
    iterations: int


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = 1} (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = int(np.nonzero(u - css / idx > 0)[0][-1])
    shift = css[rho] / (rho + 1)
    return np.clip(v - shift, 0.0, None)


def _real_rows(matrices: Sequence[np.ndarray]) -> np.ndarray:
    flat = np.stack([m.reshape(-1) for m in matrices])
    return np.concatenate([flat.real, flat.imag], axis=1)


def hull_distance(target: OperatorLike, generators: Sequence[OperatorLike], *, tol: float = HULL_DISTANCE_TOL) -> HullDistance:
    if not generators:
        raise ValidationError("hull needs at least one generator", field="generators")
    tau = as_matrix(target)
    gens = [as_matrix(g) for g in generators]
    if any(g.shape != tau.shape for g in gens):
        raise ValidationError(f"generator shapes do not match target {tau.shape}", field="generators")

    rows = _real_rows(gens)
    t = _real_rows([tau])[0]
    vertex = np.linalg.norm(rows - t, axis=1)
    best = int(np.argmin(vertex))
    m = rows.shape[0]
    if vertex[best] <= tol or m == 1:
        w = np.zeros(m)
        w[best] = 1.0
        return HullDistance(float(vertex[best]), w, 0)

    gram = rows @ rows.T
    lin = rows @ t
    step = 1.0 / max(float(np.linalg.eigvalsh(gram)[-1]), 1e-300)

    def value(w: np.ndarray) -> float:
        return float(w @ gram @ w - 2.0 * lin @ w + t @ t)

    w = np.zeros(m)
    w[best] = 1.0
    y, w_prev, momentum = w.copy(), w.copy(), 1.0
    previous = value(w)
    iteration = 0
    for iteration in range(1, _MAX_ITER + 1):
        w = project_to_simplex(y - step * (gram @ y - lin))
        current = value(w)
        if current > previous:
            # restart momentum on ascent
            y, momentum = w.copy(), 1.0
        else:
            nxt = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * momentum * momentum))
            y = w + ((momentum - 1.0) / nxt) * (w - w_prev)
            momentum = nxt
        if abs(previous - current) <= tol * tol and iteration > 1:
            previous = current
            break
        previous, w_prev = current, w

    distance = math.sqrt(max(0.0, value(w)))
    if distance > vertex[best]:
        w = np.zeros(m)
        w[best] = 1.0
        distance = float(vertex[best])
    logger.debug("hull_distance generators=%d distance=%.3e iterations=%d", m, distance, iteration)
    return HullDistance(distance, w, iteration)
