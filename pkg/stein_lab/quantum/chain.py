"""
Per-n checks of the inequality chain behind the generalised quantum
Stein lemma, plus a finite-n proxy of the asymptotic blurring lemma.

With k = floor(delta n), B the rho-dependent blurring map and F a free family:

    main  D_max(B(rho_n) || F_n) <= D_max(rho_n || F_n) + k log 1/c
    (a)   D_max(B(rho_n) || F_n) <= D_max(rho_n ⊗ rho^{⊗k} || F_{n+k})
    (b)   D_max(rho_n ⊗ rho^{⊗k} || F_{n+k}) <= D_max(rho_n || F_n) + k log 1/c
    (c)   D_max(avg_delta B(rho_n) || F_n) <= max_k D_max(B_k(rho_n) || F_n)
    (d)   Dtilde^eta(rho^n || F_n) <= Dtilde^eta(rho^n || avg B(rho_n)) + D_max(avg B(rho_n) || F_n)
    (e)   D(rho^n || F_n) <= D_max(rho_n || F_n) + e n log 1/c + g(e),  e = ||rho^n - rho_n||_1 / 2
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from stein_lab.divergences.hull import d_max_to_hull, dtilde_to_hull, rel_ent_to_hull
from stein_lab.divergences.result import DivergenceResult
from stein_lab.divergences.smoothing import dtilde_max
from stein_lab.errors import PreconditionError, ValidationError
from stein_lab.free_sets.family import FreeFamily
from stein_lab.hypergeometric import bosonic_entropy
from stein_lab.linalg import as_matrix, symmetrize, tensor, tensor_power, trace_distance, trace_positive_part
from stein_lab.linalg.operators import OperatorLike, require_state
from stein_lab.linalg.sampling import random_density_matrix
from stein_lab.quantum.blurring import (
    appended_copies,
    blur_q_average,
    blur_rho_average,
    blur_rho_k,
    blurring_average_weights,
)
from stein_lab.quantum.symmetric import SymTypeOperator
from stein_lab.typeclasses import TypeVector, type_index
from stein_lab.verdicts import CheckRecord, inapplicable, inequality

logger = logging.getLogger(__name__)


def _shifted(result: DivergenceResult, extra: float) -> tuple[float, float]:
    return result.lower + extra, result.upper + extra


def _gap(result: DivergenceResult) -> float:
    if math.isinf(result.upper):
        return 0.0
    return float(result.upper - result.lower)


def perturbed_symmetric_state(rho: OperatorLike, n: int, eps: float, rng: np.random.Generator) -> np.ndarray:
    """S_n((1 - eps) rho^{⊗n} + eps omega) for a random state omega."""
    r = require_state(as_matrix(rho), "rho")
    if not 0.0 <= eps <= 1.0:
        raise ValidationError(f"eps must lie in [0, 1], got {eps}", field="eps")
    d = r.shape[0]
    mixed = (1.0 - eps) * tensor_power(r, n) + eps * random_density_matrix(d ** n, rng)
    return symmetrize(mixed, d, n)


def check_dmax_elementary(
    rho_a: OperatorLike, n_a: int, rho_b: OperatorLike, n_b: int, family: FreeFamily
) -> list[CheckRecord]:
    """Subadditivity of D_max to the family on tensor products, and D_max(rho_n || F_n) <= n log 1/c."""
    if family.c <= 0.0:
        raise PreconditionError("family has no full-rank free state (c = 0)")
    a = d_max_to_hull(rho_a, family.generators(n_a))
    b = d_max_to_hull(rho_b, family.generators(n_b))
    joint = d_max_to_hull(tensor(rho_a, rho_b), family.generators(n_a + n_b))
    log_inv_c = math.log2(1.0 / family.c)
    return [
        inequality(
            f"dmax_subadditivity[{n_a}+{n_b}]",
            joint,
            (a.lower + b.lower, a.upper + b.upper),
            terms={"d_max_a": a.as_float(), "d_max_b": b.as_float()},
        ),
        inequality(f"dmax_universal_bound[{n_a}]", a, n_a * log_inv_c, terms={"log_inverse_c": log_inv_c}),
    ]


def check_asymptotic_continuity(
    rho: OperatorLike,
    rho_prime: OperatorLike,
    generators: Sequence[OperatorLike],
    c: float,
    *,
    name: str = "asymptotic_continuity",
) -> CheckRecord:
    """
    |D(rho||F) - D(rho'||F)| <= eps log 1/c + g(eps), eps = T(rho, rho'),
    where F is the hull of generators and holds a state >= c 1.
    """
    started = time.perf_counter()
    if not 0.0 < c <= 1.0:
        raise ValidationError(f"c must lie in (0, 1], got {c}", field="c")
    r = require_state(as_matrix(rho), "rho")
    r_prime = require_state(as_matrix(rho_prime), "rho_prime")
    a = rel_ent_to_hull(r, generators)
    b = rel_ent_to_hull(r_prime, generators)
    if a.infinite or b.infinite:
        return inapplicable(name, "relative entropy to the hull is infinite; the hull has no full-rank member")

    eps = trace_distance(r, r_prime)
    bound = eps * math.log2(1.0 / c) + float(bosonic_entropy(eps))
    # enclosure of |a - b| from the two brackets
    lo = max(0.0, a.lower - b.upper, b.lower - a.upper)
    hi = max(a.upper - b.lower, b.upper - a.lower)
    record = inequality(
        name,
        (lo, hi),
        bound,
        terms={"trace_distance": eps, "log_inverse_c": math.log2(1.0 / c), "d_rho": a.as_float(), "d_rho_prime": b.as_float()},
        certificates={"lhs_bracket": hi - lo},
        detail=f"dim={r.shape[0]} generators={len(generators)}",
    )
    return record.with_runtime(time.perf_counter() - started)


def check_gqsl_chain(
    rho: OperatorLike,
    family: FreeFamily,
    n: int,
    delta: float,
    *,
    rho_n: Optional[OperatorLike] = None,
    eta: float = 0.1,
    perturbation: float = 0.05,
    rng: Optional[np.random.Generator] = None,
) -> list[CheckRecord]:
    """
    Main blurring step and its parts (a)-(e) at a single n. rho_n defaults to
    a symmetrised perturbation of rho^{⊗n}.
    """
    started = time.perf_counter()
    r = require_state(as_matrix(rho), "rho")
    d = r.shape[0]
    if d != family.dim:
        raise ValidationError(f"rho has dim {d}, family has dim {family.dim}", field="rho")
    if family.c <= 0.0:
        raise PreconditionError("family has no full-rank free state (c = 0)")
    if not 0.0 < eta < 1.0:
        raise ValidationError(f"eta must lie in (0, 1), got {eta}", field="eta")
    k = appended_copies(n, delta)
    if rho_n is None:
        rho_n = perturbed_symmetric_state(r, n, perturbation, rng if rng is not None else np.random.default_rng(0))
    state_n = require_state(as_matrix(rho_n), "rho_n")
    gens_n = family.generators(n)
    gens_nk = family.generators(n + k)
    log_inv_c = math.log2(1.0 / family.c)
    detail = f"n={n} k={k} delta={delta:g}"

    base = d_max_to_hull(state_n, gens_n)
    blurred = blur_rho_k(n, k, r, state_n)
    blurred_dmax = d_max_to_hull(blurred, gens_n)
    extended = d_max_to_hull(tensor(state_n, tensor_power(r, k)), gens_nk)
    resource = k * log_inv_c
    records = [
        inequality(
            "chain_main",
            blurred_dmax,
            _shifted(base, resource),
            terms={"k": k, "d_max_rho_n": base.as_float(), "resource_term": resource},
            certificates={"lhs_bracket": _gap(blurred_dmax), "rhs_bracket": _gap(base)},
            detail=detail,
        ),
        inequality(
            "chain_data_processing",
            blurred_dmax,
            extended,
            certificates={"lhs_bracket": _gap(blurred_dmax), "rhs_bracket": _gap(extended)},
            detail=detail,
        ),
        inequality(
            "chain_subadditivity",
            extended,
            _shifted(base, resource),
            terms={"resource_term": resource},
            certificates={"lhs_bracket": _gap(extended), "rhs_bracket": _gap(base)},
            detail=detail,
        ),
    ]

    # (c) the delta-average is a finite mixture over k
    weights = blurring_average_weights(n, delta)
    per_k = {j: d_max_to_hull(blur_rho_k(n, j, r, state_n), gens_n) for j in weights}
    averaged = blur_rho_average(n, delta, r, state_n)
    averaged_dmax = d_max_to_hull(averaged, gens_n)
    worst = (max(v.lower for v in per_k.values()), max(v.upper for v in per_k.values()))
    records.append(
        inequality(
            "chain_convexity",
            averaged_dmax,
            worst,
            terms={"weights": {str(j): w for j, w in weights.items()}},
            certificates={"lhs_bracket": _gap(averaged_dmax)},
            detail=detail,
        )
    )

    # (d) triangle through the averaged state
    iid = tensor_power(r, n)
    smoothed = dtilde_to_hull(iid, gens_n, eta)
    to_average = dtilde_max(iid, averaged, eta)
    records.append(
        inequality(
            "chain_triangle",
            smoothed,
            (to_average.lower + averaged_dmax.lower, to_average.upper + averaged_dmax.upper),
            terms={"eta": eta, "dtilde_to_average": to_average.as_float(), "d_max_average": averaged_dmax.as_float()},
            certificates={"lhs_bracket": _gap(smoothed)},
            detail=detail,
        )
    )

    # (e) asymptotic continuity of the relative entropy of resource
    distance = trace_distance(iid, state_n)
    relative = rel_ent_to_hull(iid, gens_n)
    continuity = distance * n * log_inv_c + float(bosonic_entropy(distance))
    records.append(
        inequality(
            "chain_continuity",
            relative,
            _shifted(base, continuity),
            terms={"trace_distance": distance, "continuity_term": continuity},
            certificates={"lhs_bracket": _gap(relative)},
            detail=detail,
        )
    )

    elapsed = time.perf_counter() - started
    logger.debug("gqsl_chain n=%d k=%d verdicts=%s", n, k, [rec.verdict.value for rec in records])
    return [rec.with_runtime(elapsed / len(records)) for rec in records]


# ---------------------------------------------------------------------
# ASYMPTOTIC BLURRING PROXY
# ---------------------------------------------------------------------

def near_vacuum_product(n: int, alpha: float) -> SymTypeOperator:
    """
    |phi><phi|^{⊗n} in the qubit type basis, phi = sqrt(1 - theta^2)|0> + theta|1>,
    theta = alpha / sqrt(n). The amplitude on j ones is sqrt(C(n, j)) (1 - theta^2)^{(n-j)/2} theta^j.
    """
    theta = alpha / math.sqrt(n)
    if not 0.0 <= theta < 1.0:
        raise ValidationError(f"alpha/sqrt(n) must lie in [0, 1), got {theta}", field="alpha")
    index = type_index(n, 2)
    amplitudes = np.zeros(len(index))
    for j in range(n + 1):
        log_amp = 0.5 * (math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1))
        log_amp += 0.5 * (n - j) * math.log1p(-theta * theta)
        amplitudes[index[TypeVector(n, (n - j, j))]] = math.exp(log_amp) * theta ** j
    return SymTypeOperator(n, 2, np.outer(amplitudes, amplitudes))


@dataclass(frozen=True)
class BlurringProxy:
    n: int
    alpha: float
    Delta: float
    M_grid: tuple[float, ...]
    values: tuple[float, ...]

    @property
    def max_increase(self) -> float:
        if len(self.values) < 2:
            return 0.0
        return float(max(0.0, np.max(np.diff(self.values))))

    def monotone_record(self) -> CheckRecord:
        return inequality(
            f"blurring_proxy_monotone[n={self.n}]",
            self.max_increase,
            0.0,
            terms={"f": list(self.values), "M": list(self.M_grid)},
            detail=f"alpha={self.alpha:g} Delta={self.Delta:g}",
        )

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "alpha": self.alpha, "Delta": self.Delta, "M": list(self.M_grid), "f": list(self.values)}


def blurring_lemma_proxy(n: int, alpha: float, Delta: float, M_grid: Sequence[float]) -> BlurringProxy:
    """
    f(M) = Tr(|n,e_0><n,e_0| - M avg_delta blur_q(rho_n))_+ for the near-vacuum
    product state, with everything projected onto Sym^n.
    """
    grid = tuple(float(m) for m in sorted(M_grid))
    rho_n = near_vacuum_product(n, alpha)
    averaged = blur_q_average(n, Delta, rho_n).matrix
    vacuum = SymTypeOperator.ketbra(TypeVector.concentrated(n, 2), TypeVector.concentrated(n, 2)).matrix
    values = tuple(trace_positive_part(vacuum - m * averaged) for m in grid)
    return BlurringProxy(n, alpha, Delta, grid, values)


def blurring_proxy_trend(n_grid: Sequence[int], alpha: float, Delta: float, M_grid: Sequence[float]) -> list[BlurringProxy]:
    return [blurring_lemma_proxy(n, alpha, Delta, M_grid) for n in sorted(n_grid)]
