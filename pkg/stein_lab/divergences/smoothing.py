"""
Smoothed max-relative entropies.

    dtilde_max:  min { lambda : Tr(rho - 2^lambda sigma)_+ <= eps }
    smoothed:    min { D_max(p'||q) : p' normalised, 1/2 ||p - p'||_1 <= eps }

For classical p and lambda >= 0 the cut mass always fits back under the cap
2^lambda q (total cap 2^lambda >= 1), so the normalised smoothing equals
max(0, dtilde). The subnormalised ball gives dtilde itself.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.divergences.relative import d_max, d_max_classical
from stein_lab.divergences.result import ClassicalDistribution, DivergenceResult, Infinity, is_infinite
from stein_lab.errors import ValidationError
from stein_lab.linalg.functions import trace_positive_part
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_state

logger = logging.getLogger(__name__)

LAMBDA_CEILING = 200.0


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps < 1.0:
        raise ValidationError(f"eps must lie in [0, 1), got {eps}", field="eps")


def _vector(x: Union[np.ndarray, ClassicalDistribution]) -> np.ndarray:
    return x.weights if isinstance(x, ClassicalDistribution) else ClassicalDistribution(x).weights


@dataclass(frozen=True)
class ThresholdSearch:
    """Outcome of bisecting a nonincreasing excess function against eps."""

    lower: float
    upper: float
    trace: tuple[tuple[float, float], ...]
    infinite: bool = False

    def monotonicity_violation(self) -> float:
        """Largest increase of the excess along increasing lambda on the recorded trace."""
        points = sorted(self.trace)
        worst = 0.0
        for (_, f_prev), (_, f_next) in zip(points, points[1:]):
            worst = max(worst, f_next - f_prev)
        return worst


def bisect_threshold(
    excess: Callable[[float], float],
    eps: float,
    lower: float,
    upper: float | None,
    tol: float | None = None,
) -> ThresholdSearch:
    """
    Smallest lambda with excess(lambda) <= eps, for nonincreasing excess.

    lower must satisfy excess > eps unless it is already the answer. When
    upper is None it is found by doubling up to LAMBDA_CEILING.
    """
    tol = get_tolerances().bisection if tol is None else tol
    trace: list[tuple[float, float]] = []

    def evaluate(lam: float) -> float:
        value = excess(lam)
        trace.append((lam, value))
        return value

    if evaluate(lower) <= eps:
        return ThresholdSearch(lower, lower, tuple(trace))

    if upper is None:
        step = 1.0
        upper = max(lower + step, 1.0)
        while evaluate(upper) > eps:
            if upper >= LAMBDA_CEILING:
                return ThresholdSearch(upper, math.inf, tuple(trace), infinite=True)
            step *= 2.0
            upper = min(LAMBDA_CEILING, lower + step)
    else:
        evaluate(upper)

    lo, hi = lower, upper
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if evaluate(mid) <= eps:
            hi = mid
        else:
            lo = mid
    logger.debug("bisect_threshold eps=%g bracket=[%.12f, %.12f] evaluations=%d", eps, lo, hi, len(trace))
    return ThresholdSearch(lo, hi, tuple(trace))


def _search_result(search: ThresholdSearch, witness: dict) -> DivergenceResult:
    certificate = {"monotonicity_violation": search.monotonicity_violation(), "bracket_width": search.upper - search.lower}
    if search.infinite:
        return DivergenceResult(Infinity.POSITIVE, witness=witness, certificate=certificate)
    witness = {**witness, "lambda": search.upper}
    return DivergenceResult(search.upper, witness=witness, certificate=certificate, bracket=(search.lower, search.upper))


# ---------------------------------------------------------------------
# THRESHOLD FORM
# ---------------------------------------------------------------------

def dtilde_max(rho: Union[OperatorLike, ClassicalDistribution], sigma: Union[OperatorLike, ClassicalDistribution], eps: float) -> DivergenceResult:
    _check_eps(eps)
    if isinstance(rho, ClassicalDistribution) and isinstance(sigma, ClassicalDistribution):
        return dtilde_max_classical(rho, sigma, eps)
    r = require_state(as_matrix(rho), "rho")
    s = require_state(as_matrix(sigma), "sigma")
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}", field="sigma")

    cap = d_max(r, s)
    if eps == 0.0:
        return DivergenceResult(cap, certificate={"bracket_width": 0.0})
    search = bisect_threshold(
        lambda lam: trace_positive_part(r - 2.0 ** lam * s),
        eps,
        lower=math.log2(1.0 - eps),
        upper=None if is_infinite(cap) else max(float(cap), math.log2(1.0 - eps)),
    )
    return _search_result(search, {})


def dtilde_max_classical(p: Union[np.ndarray, ClassicalDistribution], q: Union[np.ndarray, ClassicalDistribution], eps: float) -> DivergenceResult:
    _check_eps(eps)
    pv, qv = _vector(p), _vector(q)
    if pv.shape != qv.shape:
        raise ValidationError("label spaces differ", field="q")
    cap = d_max_classical(pv, qv)
    if eps == 0.0:
        return DivergenceResult(cap, certificate={"bracket_width": 0.0})
    search = bisect_threshold(
        lambda lam: float(np.sum(np.clip(pv - 2.0 ** lam * qv, 0.0, None))),
        eps,
        lower=math.log2(1.0 - eps),
        upper=None if is_infinite(cap) else max(float(cap), math.log2(1.0 - eps)),
    )
    return _search_result(search, {})


# ---------------------------------------------------------------------
# TRACE-BALL SMOOTHING (CLASSICAL)
# ---------------------------------------------------------------------

def redeposit_under_cap(p: np.ndarray, cap: np.ndarray) -> np.ndarray:
    """
    Cut p down to cap and spread the removed mass over the remaining slack
    in proportion to it. Requires sum(cap) >= 1.
    """
    kept = np.minimum(p, cap)
    removed = float(np.sum(p - kept))
    slack = cap - kept
    total_slack = float(np.sum(slack))
    if removed <= 0.0 or total_slack <= 0.0:
        return kept
    return kept + removed * slack / total_slack


def d_max_smoothed_classical(
    p: Union[np.ndarray, ClassicalDistribution],
    q: Union[np.ndarray, ClassicalDistribution],
    eps: float,
    *,
    normalized: bool = True,
) -> DivergenceResult:
    """
    Smoothed D_max with witness p'.

    normalized=False smooths over subnormalised p' (generalised trace
    distance); the optimum is then the cut p' = min(p, 2^lambda q).
    """
    _check_eps(eps)
    pv, qv = _vector(p), _vector(q)
    if pv.shape != qv.shape:
        raise ValidationError("label spaces differ", field="q")

    def excess(lam: float) -> float:
        return float(np.sum(np.clip(pv - 2.0 ** lam * qv, 0.0, None)))

    cap = d_max_classical(pv, qv)
    if eps == 0.0:
        witness = {"smoothed": pv.copy()}
        if is_infinite(cap):
            return DivergenceResult(Infinity.POSITIVE, witness=witness)
        return DivergenceResult(cap, witness=witness, certificate={"ball_residual": 0.0, "cap_residual": 0.0})

    floor = 0.0 if normalized else math.log2(1.0 - eps)
    search = bisect_threshold(excess, eps, lower=floor, upper=None if is_infinite(cap) else max(float(cap), floor))
    if search.infinite:
        return DivergenceResult(Infinity.POSITIVE, certificate={"monotonicity_violation": search.monotonicity_violation()})

    lam = search.upper
    ceiling = 2.0 ** lam * qv
    smoothed = redeposit_under_cap(pv, ceiling) if normalized else np.minimum(pv, ceiling)
    distance = 0.5 * float(np.sum(np.abs(pv - smoothed)))
    if not normalized:
        distance += 0.5 * (1.0 - float(np.sum(smoothed)))
    certificate = {
        "ball_residual": max(0.0, distance - eps),
        "cap_residual": max(0.0, float(np.max(smoothed - ceiling))),
        "monotonicity_violation": search.monotonicity_violation(),
        "bracket_width": search.upper - search.lower,
    }
    return DivergenceResult(
        lam,
        witness={"smoothed": smoothed, "lambda": lam},
        certificate=certificate,
        bracket=(search.lower, search.upper),
    )
