"""
Divergences from a state to the convex hull of finitely many generators.

    rel_ent_to_hull   min_w D(rho || sum_i w_i sigma_i)       Frank-Wolfe
    d_max_to_hull     min_w D_max(rho || sigma_w)             cone program (cvxpy)
    dtilde_to_hull    min_w Dtilde^eps(rho || sigma_w)        cone program (cvxpy)

The hull divergence uses the convention D(rho||F) = min over F.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import linalg as sla

from stein_lab.config import get_tolerances
from stein_lab.divergences.optimize import frank_wolfe_simplex
from stein_lab.divergences.relative import LN2, d_max, umegaki
from stein_lab.divergences.result import DivergenceResult, Infinity, as_float, is_infinite
from stein_lab.divergences.sdp import solve_hull_cone
from stein_lab.divergences.smoothing import dtilde_max
from stein_lab.errors import ValidationError
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hull:
    """Stacked generator states, shape (m, D, D)."""

    stack: np.ndarray

    @classmethod
    def of(cls, generators: Sequence[OperatorLike]) -> "Hull":
        if not generators:
            raise ValidationError("hull needs at least one generator", field="generators")
        mats = [require_state(as_matrix(g), f"generators[{i}]") for i, g in enumerate(generators)]
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise ValidationError(f"generators have mixed shapes {sorted(shapes)}", field="generators")
        return cls(np.stack(mats))

    @property
    def count(self) -> int:
        return int(self.stack.shape[0])

    @property
    def dim(self) -> int:
        return int(self.stack.shape[1])

    def mixture(self, weights: np.ndarray) -> np.ndarray:
        return np.tensordot(weights, self.stack, axes=1)

    def uniform(self) -> np.ndarray:
        return self.stack.mean(axis=0)

    def min_eigenvalue_of_uniform(self) -> float:
        return float(np.linalg.eigvalsh(self.uniform())[0])


def _check_rho(rho: OperatorLike, hull: Hull) -> np.ndarray:
    r = require_state(as_matrix(rho), "rho")
    if r.shape[0] != hull.dim:
        raise ValidationError(f"rho has dim {r.shape[0]}, generators have dim {hull.dim}", field="rho")
    return r


# ---------------------------------------------------------------------
# RELATIVE ENTROPY TO THE HULL
# ---------------------------------------------------------------------

def _log_derivative_weights(values: np.ndarray, floor: float) -> np.ndarray:
    """Divided differences of log on the spectrum; zero outside the support."""
    inside = values >= floor
    safe = np.where(inside, values, 1.0)
    logs = np.log(safe)
    diff_v = safe[:, None] - safe[None, :]
    diff_l = logs[:, None] - logs[None, :]
    close = np.abs(diff_v) <= 1e-10 * np.maximum(safe[:, None], safe[None, :])
    divided = diff_l / np.where(close, 1.0, diff_v)
    derivative = 2.0 / (safe[:, None] + safe[None, :])
    out = np.where(close, derivative, divided)
    return np.where(inside[:, None] & inside[None, :], out, 0.0)


def rel_ent_to_hull(
    rho: OperatorLike,
    generators: Sequence[OperatorLike],
    *,
    away_steps: bool = False,
    gap_tol: float | None = None,
    max_iter: int | None = None,
) -> DivergenceResult:
    hull = Hull.of(generators)
    r = _check_rho(rho, hull)
    tol = get_tolerances()
    full_rank = hull.min_eigenvalue_of_uniform() >= tol.support

    if hull.count == 1:
        value = umegaki(r, hull.stack[0])
        return DivergenceResult(value, witness={"weights": np.ones(1)}, certificate={"gap": 0.0, "full_rank_mixture": float(full_rank)})
    if is_infinite(umegaki(r, hull.uniform())):
        # every hull member is supported inside supp of the uniform mixture
        return DivergenceResult(Infinity.POSITIVE, certificate={"full_rank_mixture": float(full_rank)})

    def objective(w: np.ndarray) -> float:
        value = umegaki(r, hull.mixture(w))
        return math.inf if is_infinite(value) else float(value)

    def gradient(w: np.ndarray) -> np.ndarray:
        s_vals, s_vecs = sla.eigh(hull.mixture(w))
        weights = _log_derivative_weights(s_vals, tol.support)
        rho_t = s_vecs.conj().T @ r @ s_vecs
        gens_t = np.einsum("ji,mjk,kl->mil", s_vecs.conj(), hull.stack, s_vecs)
        # d/dw_i Tr rho log sigma_w = sum_jk rho_kj L_jk sigma_i,jk
        kernel = rho_t.T * weights
        return -np.real(np.einsum("jk,mjk->m", kernel, gens_t)) / LN2

    vertex_values = np.array([objective(np.eye(hull.count)[i]) for i in range(hull.count)])
    start = np.full(hull.count, 1.0 / hull.count)
    if np.min(vertex_values) < objective(start):
        start = np.eye(hull.count)[int(np.argmin(vertex_values))]

    outcome = frank_wolfe_simplex(objective, gradient, start, gap_tol=gap_tol, max_iter=max_iter, away_steps=away_steps)
    if not outcome.converged:
        logger.warning("rel_ent_to_hull gap_not_reached gap=%.3e iterations=%d", outcome.gap, outcome.iterations)
    return DivergenceResult(
        outcome.value,
        witness={"weights": outcome.weights, "sigma": hull.mixture(outcome.weights)},
        certificate={"gap": outcome.gap, "iterations": float(outcome.iterations), "full_rank_mixture": float(full_rank)},
        approximate=not outcome.converged,
        bracket=(max(0.0, outcome.value - outcome.gap), outcome.value),
    )


# ---------------------------------------------------------------------
# MAX-RELATIVE ENTROPIES TO THE HULL
# ---------------------------------------------------------------------

# mixing weight of the uniform mixture added to a candidate; keeps supports full
_BLEND = 1e-9


def _candidates(hull: Hull, weights: np.ndarray) -> list[np.ndarray]:
    blended = (1.0 - _BLEND) * weights + _BLEND / hull.count
    return [weights, blended, np.full(hull.count, 1.0 / hull.count)]


def _hull_result(lower: float, upper: float, weights: np.ndarray, hull: Hull, extra: dict) -> DivergenceResult:
    # the dual bound can cross the exact upper value by rounding only
    lower = min(lower, upper)
    return DivergenceResult(
        upper,
        witness={"weights": weights, "sigma": hull.mixture(weights), "lambda": upper},
        certificate={"bracket_width": upper - lower, **extra},
        approximate=(upper - lower) > get_tolerances().certificate,
        bracket=(lower, upper),
    )


def d_max_to_hull(rho: OperatorLike, generators: Sequence[OperatorLike]) -> DivergenceResult:
    """
    Solve min sum_i y_i s.t. rho <= sum_i y_i sigma_i as a cone program.
    The upper value is D_max(rho || sigma_w) for the solver's weights,
    the lower value comes from its dual matrix.
    """
    hull = Hull.of(generators)
    r = _check_rho(rho, hull)
    if hull.count == 1:
        return DivergenceResult(d_max(r, hull.stack[0]), witness={"weights": np.ones(1)})
    if is_infinite(d_max(r, hull.uniform())):
        return DivergenceResult(Infinity.POSITIVE, certificate={"full_rank_mixture": 0.0})

    solution = solve_hull_cone(r, hull.stack)
    scored = [(as_float(d_max(r, hull.mixture(w))), w) for w in _candidates(hull, solution.weights)]
    upper, weights = min(scored, key=lambda item: item[0])
    lower = math.log2(max(solution.dual_bound, 1.0))
    return _hull_result(lower, upper, weights, hull, {"solver_primal": solution.primal, "solver_dual": solution.dual_bound})


def dtilde_to_hull(rho: OperatorLike, generators: Sequence[OperatorLike], eps: float) -> DivergenceResult:
    """
    Same cone program with a tail P >= 0, Tr P <= eps absorbing rho - sum_i y_i sigma_i.
    The upper value is Dtilde^eps(rho || sigma_w) for the solver's weights.
    """
    if not 0.0 <= eps < 1.0:
        raise ValidationError(f"eps must lie in [0, 1), got {eps}", field="eps")
    if eps == 0.0:
        return d_max_to_hull(rho, generators)
    hull = Hull.of(generators)
    r = _check_rho(rho, hull)
    if hull.count == 1:
        return dtilde_max(r, hull.stack[0], eps)
    if dtilde_max(r, hull.uniform(), eps).infinite:
        return DivergenceResult(Infinity.POSITIVE)

    solution = solve_hull_cone(r, hull.stack, eps)
    scored = [(dtilde_max(r, hull.mixture(w), eps).upper, w) for w in _candidates(hull, solution.weights)]
    upper, weights = min(scored, key=lambda item: item[0])
    lower = math.log2(max(solution.dual_bound, 1.0 - eps))
    return _hull_result(lower, upper, weights, hull, {"solver_primal": solution.primal, "solver_dual": solution.dual_bound})
