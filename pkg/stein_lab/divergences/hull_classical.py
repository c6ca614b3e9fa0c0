"""
Classical divergences to the convex hull of finitely many distributions.

For commuting inputs the hull problems are linear programs and are solved
exactly with HiGHS; the relative entropy keeps the Frank-Wolfe engine.
Generators are the columns of Q (shape |X| x m).

    d_max_to_hull_classical      min sum v      s.t. Q v >= p, v >= 0
    dtilde_to_hull_classical     min sum v      s.t. Q v + z >= p, sum z <= eps
    d_H_to_hull_classical        min tau        s.t. Q^T T <= tau, T.p >= 1-eps, 0 <= T <= 1
"""

from __future__ import annotations

import logging
import math
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linprog

from stein_lab.config import get_tolerances
from stein_lab.divergences.hypothesis import ZERO_TYPE_II, d_H_classical
from stein_lab.divergences.optimize import frank_wolfe_simplex
from stein_lab.divergences.relative import LN2, relative_entropy_classical
from stein_lab.divergences.result import ClassicalDistribution, DivergenceResult, Infinity, is_infinite
from stein_lab.divergences.smoothing import redeposit_under_cap
from stein_lab.errors import ValidationError

logger = logging.getLogger(__name__)

DistributionLike = Union[np.ndarray, Sequence[float], ClassicalDistribution]


def _weights(x: DistributionLike, name: str) -> np.ndarray:
    if isinstance(x, ClassicalDistribution):
        return np.asarray(x.weights, dtype=float)
    try:
        return ClassicalDistribution(np.asarray(x, dtype=float)).weights
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc}", field=name, residual=exc.residual) from exc


def generator_matrix(generators: Sequence[DistributionLike]) -> np.ndarray:
    """Stack generators as columns."""
    if len(generators) == 0:
        raise ValidationError("hull needs at least one generator", field="generators")
    cols = [_weights(g, f"generators[{i}]") for i, g in enumerate(generators)]
    sizes = {c.size for c in cols}
    if len(sizes) != 1:
        raise ValidationError(f"generators have mixed sizes {sorted(sizes)}", field="generators")
    return np.column_stack(cols)


def _prepare(p: DistributionLike, generators: Sequence[DistributionLike]) -> tuple[np.ndarray, np.ndarray]:
    q = generator_matrix(generators)
    pv = _weights(p, "p")
    if pv.size != q.shape[0]:
        raise ValidationError(f"p has {pv.size} labels, generators have {q.shape[0]}", field="p")
    return pv, q


def _uncovered_mass(pv: np.ndarray, q: np.ndarray) -> float:
    """p-mass on labels no generator reaches."""
    dead = np.max(q, axis=1) < get_tolerances().support
    return float(np.sum(pv[dead]))


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps < 1.0:
        raise ValidationError(f"eps must lie in [0, 1), got {eps}", field="eps")


# ---------------------------------------------------------------------
# MAX-RELATIVE ENTROPIES
# ---------------------------------------------------------------------

def d_max_to_hull_classical(p: DistributionLike, generators: Sequence[DistributionLike]) -> DivergenceResult:
    pv, q = _prepare(p, generators)
    if _uncovered_mass(pv, q) > get_tolerances().support_mass:
        return DivergenceResult(Infinity.POSITIVE, certificate={"uncovered_mass": _uncovered_mass(pv, q)})

    m = q.shape[1]
    res = linprog(np.ones(m), A_ub=-q, b_ub=-pv, bounds=[(0.0, None)] * m, method="highs")
    if res.status != 0:
        logger.warning("d_max_to_hull_classical lp_status=%d message=%s", res.status, res.message)
        return DivergenceResult(Infinity.POSITIVE, certificate={"lp_status": float(res.status)})

    primal = float(res.fun)
    dual = float(-pv @ res.ineqlin.marginals)
    v = np.clip(res.x, 0.0, None)
    weights = v / v.sum()
    value = math.log2(primal)
    lower = math.log2(dual) if dual > 0.0 else 0.0
    return DivergenceResult(
        value,
        witness={"weights": weights, "sigma": q @ weights, "lambda": value},
        certificate={
            "duality_gap": primal - dual,
            "cap_residual": max(0.0, float(np.max(pv - primal * (q @ weights)))),
        },
        bracket=(min(max(lower, 0.0), value), value),
    )


def _dtilde_program(pv: np.ndarray, q: np.ndarray, eps: float):
    size, m = q.shape
    # variables (v, z); rows: -Qv - z <= -p, sum z <= eps
    c = np.concatenate([np.ones(m), np.zeros(size)])
    a_ub = np.block([[-q, -np.eye(size)], [np.zeros((1, m)), np.ones((1, size))]])
    b_ub = np.concatenate([-pv, [eps]])
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0.0, None)] * (m + size), method="highs")
    return res, b_ub


def dtilde_to_hull_classical(p: DistributionLike, generators: Sequence[DistributionLike], eps: float) -> DivergenceResult:
    """min over the hull of min { lambda : sum_x (p - 2^lambda sigma)_+ <= eps }; may be negative."""
    _check_eps(eps)
    if eps == 0.0:
        return d_max_to_hull_classical(p, generators)
    pv, q = _prepare(p, generators)
    if _uncovered_mass(pv, q) > eps + get_tolerances().support_mass:
        return DivergenceResult(Infinity.POSITIVE, certificate={"uncovered_mass": _uncovered_mass(pv, q)})

    m = q.shape[1]
    res, b_ub = _dtilde_program(pv, q, eps)
    if res.status != 0:
        logger.warning("dtilde_to_hull_classical lp_status=%d message=%s", res.status, res.message)
        return DivergenceResult(Infinity.POSITIVE, certificate={"lp_status": float(res.status)})

    primal = float(res.fun)
    dual = float(b_ub @ res.ineqlin.marginals)
    v = np.clip(res.x[:m], 0.0, None)
    weights = v / v.sum()
    sigma = q @ weights
    value = math.log2(primal)
    # every feasible v has sum v >= 1 - eps
    lower = math.log2(max(dual, 1.0 - eps))
    excess = float(np.sum(np.clip(pv - primal * sigma, 0.0, None)))
    return DivergenceResult(
        value,
        witness={"weights": weights, "sigma": sigma, "lambda": value},
        certificate={"duality_gap": primal - dual, "excess_residual": max(0.0, excess - eps)},
        bracket=(min(lower, value), value),
    )


def d_max_smoothed_to_hull_classical(p: DistributionLike, generators: Sequence[DistributionLike], eps: float) -> DivergenceResult:
    """
    Smoothing over normalised p' in the eps trace ball: max(0, dtilde).

    The witness p' is the cut of p under 2^lambda sigma with the removed mass
    spread over the remaining slack.
    """
    _check_eps(eps)
    pv, _ = _prepare(p, generators)
    base = dtilde_to_hull_classical(pv, generators, eps)
    if base.infinite:
        return base
    lam = max(0.0, base.as_float())
    sigma = base.witness["sigma"]
    ceiling = 2.0 ** lam * sigma
    smoothed = redeposit_under_cap(pv, ceiling)
    distance = 0.5 * float(np.sum(np.abs(pv - smoothed)))
    return DivergenceResult(
        lam,
        witness={"weights": base.witness["weights"], "sigma": sigma, "smoothed": smoothed, "lambda": lam},
        certificate={
            **base.certificate,
            "ball_residual": max(0.0, distance - eps),
            "cap_residual": max(0.0, float(np.max(smoothed - ceiling))),
        },
        bracket=(max(0.0, base.lower), lam),
    )


# ---------------------------------------------------------------------
# HYPOTHESIS TESTING
# ---------------------------------------------------------------------

def d_H_to_hull_classical(p: DistributionLike, generators: Sequence[DistributionLike], eps: float) -> DivergenceResult:
    """
    D_H^eps(p || hull) = -log2 max_sigma beta(p, sigma) = -log2 min_T max_i T.q_i.

    The dual multipliers of the m type-II rows give the least favourable
    mixture sigma_w; beta(p, sigma_w) certifies the optimum from the other side.
    """
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}", field="eps")
    pv, q = _prepare(p, generators)
    size, m = q.shape

    # variables (T, tau)
    c = np.concatenate([np.zeros(size), [1.0]])
    a_ub = np.block([[q.T, -np.ones((m, 1))], [-pv[None, :], np.zeros((1, 1))]])
    b_ub = np.concatenate([np.zeros(m), [-(1.0 - eps)]])
    bounds = [(0.0, 1.0)] * size + [(0.0, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise ValidationError(f"type-II program failed: {res.message}", field="generators")

    tau = float(res.fun)
    test = np.clip(res.x[:size], 0.0, 1.0)
    multipliers = np.clip(-res.ineqlin.marginals[:m], 0.0, None)
    weights = multipliers / multipliers.sum() if multipliers.sum() > 0 else np.full(m, 1.0 / m)
    sigma = q @ weights
    worst = d_H_classical(pv, ClassicalDistribution.normalized(sigma), eps)
    beta_w = float(worst.witness["type_II"])
    witness = {"test": test, "weights": weights, "sigma": sigma, "type_II": tau}
    certificate = {
        "duality_gap": max(0.0, tau - beta_w),
        "type_I_residual": max(0.0, (1.0 - eps) - float(test @ pv)),
    }
    if tau <= ZERO_TYPE_II:
        return DivergenceResult(Infinity.POSITIVE, witness=witness, certificate=certificate)
    value = -math.log2(tau)
    upper = worst.value if is_infinite(worst.value) else max(value, float(worst.value))
    return DivergenceResult(value, witness=witness, certificate=certificate, bracket=(value, upper))


# ---------------------------------------------------------------------
# RELATIVE ENTROPY
# ---------------------------------------------------------------------

def rel_ent_to_hull_classical(
    p: DistributionLike,
    generators: Sequence[DistributionLike],
    *,
    away_steps: bool = False,
    gap_tol: float | None = None,
    max_iter: int | None = None,
) -> DivergenceResult:
    pv, q = _prepare(p, generators)
    m = q.shape[1]
    if m == 1:
        return DivergenceResult(relative_entropy_classical(pv, q[:, 0]), witness={"weights": np.ones(1)}, certificate={"gap": 0.0})
    if _uncovered_mass(pv, q) > get_tolerances().support_mass:
        return DivergenceResult(Infinity.POSITIVE, certificate={"uncovered_mass": _uncovered_mass(pv, q)})

    live = pv > 0.0
    p_live, q_live = pv[live], q[live]

    def objective(w: np.ndarray) -> float:
        mix = q_live @ w
        if np.any(mix <= 0.0):
            return math.inf
        return float(np.sum(p_live * np.log2(p_live / mix)))

    def gradient(w: np.ndarray) -> np.ndarray:
        mix = np.maximum(q_live @ w, 1e-300)
        return -(p_live / mix) @ q_live / LN2

    eye = np.eye(m)
    vertex_values = np.array([objective(eye[i]) for i in range(m)])
    start = np.full(m, 1.0 / m)
    if np.min(vertex_values) < objective(start):
        start = eye[int(np.argmin(vertex_values))]

    outcome = frank_wolfe_simplex(objective, gradient, start, gap_tol=gap_tol, max_iter=max_iter, away_steps=away_steps)
    if not outcome.converged:
        logger.warning("rel_ent_to_hull_classical gap_not_reached gap=%.3e iterations=%d", outcome.gap, outcome.iterations)
    return DivergenceResult(
        max(0.0, outcome.value),
        witness={"weights": outcome.weights, "sigma": q @ outcome.weights},
        certificate={"gap": outcome.gap, "iterations": float(outcome.iterations)},
        approximate=not outcome.converged,
        bracket=(max(0.0, outcome.value - outcome.gap), max(0.0, outcome.value)),
    )
