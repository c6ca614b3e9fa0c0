"""
Cone programs for max-divergences to a convex hull, solved with cvxpy.

For generators sigma_i and a state rho,

    min  sum_i y_i
    s.t. sum_i y_i sigma_i + P - rho >= 0,   P >= 0,   Tr P <= eps,   y >= 0

has value 2^{D_max(rho||hull)} when eps = 0 (P is dropped) and
2^{Dtilde^eps(rho||hull)} when eps > 0. Hermitian data enter through the
real embedding A -> [[Re A, -Im A], [Im A, Re A]], which keeps the PSD
order and doubles traces.

The solver's primal weights are only used as a candidate; callers turn
them into a certified upper value. The dual matrix Z of the order
constraint gives the certified lower value

    sum_i y_i >= Tr(Z rho) - eps lambda_max(Z)   whenever Z >= 0, Tr(Z sigma_i) <= 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import cvxpy as cp
import numpy as np

from stein_lab.config import get_tolerances

logger = logging.getLogger(__name__)

SDP_SOLVER = "CLARABEL"
_ACCEPTED = {cp.OPTIMAL, cp.OPTIMAL_INACCURATE}


@dataclass(frozen=True)
class ConeSolution:
    """weights on the simplex; dual_bound is a certified lower bound on 2^lambda."""

    weights: np.ndarray
    primal: float
    dual_bound: float
    status: str

    @property
    def solved(self) -> bool:
        return self.status in _ACCEPTED


def real_embedding(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    a = (a + a.conj().T) / 2
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def _psd_part(z: np.ndarray) -> np.ndarray:
    z = (z + z.T) / 2
    values, vectors = np.linalg.eigh(z)
    return (vectors * np.clip(values, 0.0, None)) @ vectors.T


def _solver_settings(solver: str, tol: float) -> dict[str, float]:
    if solver == "CLARABEL":
        return {"tol_gap_abs": tol, "tol_gap_rel": tol, "tol_feas": tol}
    return {}


def _dual_bound(dual: Optional[np.ndarray], rho_r: np.ndarray, gens_r: np.ndarray, eps: float) -> float:
    """Best certified lower bound on the optimum; the trivial one is 1 - eps."""
    best = 1.0 - eps
    if dual is None:
        return best
    raw = np.asarray(dual, dtype=float).reshape(rho_r.shape)
    # the sign convention of equality duals is solver specific; both are tried
    for sign in (1.0, -1.0):
        z = _psd_part(sign * raw)
        scale = float(np.max(np.tensordot(gens_r, z, axes=([1, 2], [0, 1]))))
        if scale <= 0.0:
            continue
        z = z / scale
        # Tr P <= eps becomes Tr P <= 2 eps under the embedding
        bound = float(np.sum(z * rho_r)) - 2.0 * eps * float(np.linalg.eigvalsh(z)[-1])
        best = max(best, bound)
    return best


def solve_hull_cone(rho: np.ndarray, stack: np.ndarray, eps: float = 0.0, *, solver: Optional[str] = None) -> ConeSolution:
    count = int(stack.shape[0])
    rho_r = real_embedding(rho)
    gens_r = np.stack([real_embedding(s) for s in stack])
    size = rho_r.shape[0]

    y = cp.Variable(count, nonneg=True)
    order = cp.Variable((size, size), PSD=True)
    mixture = cp.reshape(gens_r.reshape(count, -1).T @ y, (size, size), order="C")
    excess = mixture - rho_r
    constraints = []
    if eps > 0.0:
        tail = cp.Variable((size, size), PSD=True)
        excess = excess + tail
        constraints.append(cp.trace(tail) <= 2.0 * eps)
    balance = order == excess
    constraints.insert(0, balance)
    problem = cp.Problem(cp.Minimize(cp.sum(y)), constraints)

    solver = solver or SDP_SOLVER
    uniform = np.full(count, 1.0 / count)
    try:
        problem.solve(solver=solver, **_solver_settings(solver, get_tolerances().sdp))
    except cp.error.SolverError as exc:
        logger.warning("hull_cone solver_error solver=%s %s", solver, exc)
        return ConeSolution(uniform, math.inf, 1.0 - eps, "solver_error")

    status = str(problem.status)
    if status not in _ACCEPTED or y.value is None:
        logger.warning("hull_cone status=%s solver=%s generators=%d dim=%d", status, solver, count, size // 2)
        return ConeSolution(uniform, math.inf, 1.0 - eps, status)

    raw = np.clip(np.asarray(y.value, dtype=float), 0.0, None)
    total = float(raw.sum())
    weights = raw / total if total > 0.0 else uniform
    dual = _dual_bound(balance.dual_value, rho_r, gens_r, eps)
    logger.debug("hull_cone status=%s primal=%.12e dual=%.12e", status, float(problem.value), dual)
    return ConeSolution(weights, float(problem.value), dual, status)
