"""
Hypothesis-testing relative entropy D_H^eps.

    beta = min { Tr Q sigma : 0 <= Q <= 1, Tr Q rho >= 1 - eps },  D_H = -log2 beta

Quantum inputs are solved with Neyman-Pearson tests P_>(u rho - sigma): the
accepted rho-mass is nondecreasing in u, so u is bisected and the two
bracketing projectors are mixed to hit 1 - eps exactly. Every result
carries the dual value psi(u) = u(1 - eps) - Tr(u rho - sigma)_+ <= beta.
"""

from __future__ import annotations

import logging
import math
from typing import Union

import numpy as np
from scipy import linalg as sla

from stein_lab.config import get_tolerances
from stein_lab.divergences.result import ClassicalDistribution, DivergenceResult, Infinity
from stein_lab.errors import ValidationError
from stein_lab.linalg.functions import trace_positive_part
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_state

logger = logging.getLogger(__name__)

# type-II errors at or below this are treated as exactly zero
ZERO_TYPE_II = 1e-14
_BISECTION_STEPS = 200


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}", field="eps")


def _np_projector(x: np.ndarray) -> np.ndarray:
    values, vectors = sla.eigh((x + x.conj().T) / 2)
    kept = vectors[:, values > 0.0]
    return kept @ kept.conj().T


def hypothesis_dual(rho: OperatorLike, sigma: OperatorLike, eps: float, u: float) -> float:
    """psi(u) = u (1 - eps) - Tr(u rho - sigma)_+, a lower bound on beta for every u >= 0."""
    r, s = as_matrix(rho), as_matrix(sigma)
    return u * (1.0 - eps) - trace_positive_part(u * r - s)


def _result_from_beta(beta: float, dual: float, witness: dict, certificate: dict) -> DivergenceResult:
    if beta <= ZERO_TYPE_II:
        return DivergenceResult(Infinity.POSITIVE, witness=witness, certificate=certificate)
    upper = Infinity.POSITIVE if dual <= ZERO_TYPE_II else -math.log2(dual)
    return DivergenceResult(-math.log2(beta), witness=witness, certificate=certificate, bracket=(-math.log2(beta), upper))


def d_H(rho: Union[OperatorLike, ClassicalDistribution], sigma: Union[OperatorLike, ClassicalDistribution], eps: float) -> DivergenceResult:
    _check_eps(eps)
    if isinstance(rho, ClassicalDistribution) and isinstance(sigma, ClassicalDistribution):
        return d_H_classical(rho.weights, sigma.weights, eps)

    r = require_state(as_matrix(rho), "rho")
    s = require_state(as_matrix(sigma), "sigma")
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}", field="sigma")
    target = 1.0 - eps

    def accepted(u: float) -> tuple[float, np.ndarray]:
        q = _np_projector(u * r - s)
        return float(np.trace(q @ r).real), q

    lo, hi = 0.0, 1.0 / eps
    mass_lo, q_lo = 0.0, np.zeros_like(r)
    mass_hi, q_hi = accepted(hi)
    while mass_hi < target:
        hi *= 2.0
        mass_hi, q_hi = accepted(hi)
        if hi > 1e300:
            raise ValidationError("Neyman-Pearson search diverged", field="rho")

    for _ in range(_BISECTION_STEPS):
        if hi - lo <= 1e-15 * hi:
            break
        mid = 0.5 * (lo + hi)
        mass, q = accepted(mid)
        if mass >= target:
            hi, mass_hi, q_hi = mid, mass, q
        else:
            lo, mass_lo, q_lo = mid, mass, q

    theta = 1.0 if mass_hi - mass_lo <= 0.0 else (target - mass_lo) / (mass_hi - mass_lo)
    theta = min(1.0, max(0.0, theta))
    test = (1.0 - theta) * q_lo + theta * q_hi
    beta = float(np.trace(test @ s).real)
    dual = max(hypothesis_dual(r, s, eps, lo), hypothesis_dual(r, s, eps, hi), 0.0)
    certificate = {
        "duality_gap": beta - dual,
        "type_I_residual": abs(float(np.trace(test @ r).real) - target),
    }
    logger.debug("d_H eps=%g beta=%.6e gap=%.3e threshold=%.6e", eps, beta, beta - dual, 1.0 / hi)
    return _result_from_beta(beta, dual, {"test": test, "threshold": 1.0 / hi, "type_II": beta}, certificate)


def d_H_classical(p: Union[np.ndarray, ClassicalDistribution], q: Union[np.ndarray, ClassicalDistribution], eps: float) -> DivergenceResult:
    """Likelihood-ratio greedy fill: accept labels by descending p/q, one fractional label on the boundary."""
    _check_eps(eps)
    pv = p.weights if isinstance(p, ClassicalDistribution) else ClassicalDistribution(p).weights
    qv = q.weights if isinstance(q, ClassicalDistribution) else ClassicalDistribution(q).weights
    if pv.shape != qv.shape:
        raise ValidationError("label spaces differ", field="q")
    target = 1.0 - eps

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(qv > 0, pv / np.where(qv > 0, qv, 1.0), np.where(pv > 0, np.inf, 0.0))
    order = np.argsort(-ratio, kind="stable")
    test = np.zeros_like(pv)
    filled = 0.0
    boundary = int(order[-1])
    for x in order:
        if filled >= target:
            break
        if pv[x] <= 0.0:
            continue
        take = min(1.0, (target - filled) / pv[x])
        test[x] = take
        filled += take * pv[x]
        boundary = int(x)

    beta = float(test @ qv)
    if qv[boundary] > 0 and pv[boundary] > 0:
        u = qv[boundary] / pv[boundary]
    else:
        u = 0.0
    dual = max(0.0, u * target - float(np.sum(np.clip(u * pv - qv, 0.0, None))))
    certificate = {"duality_gap": beta - dual, "type_I_residual": abs(float(test @ pv) - target)}
    return _result_from_beta(beta, dual, {"test": test, "type_II": beta}, certificate)
