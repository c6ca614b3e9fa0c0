"""
One-shot generalised classical Stein inequality against a free family,
and finite-n rate tables.

Every quantity is evaluated on n-types: p^{⊗n} is permutation invariant
and the free family is closed under permutations, so each hull problem
may be restricted to symmetrised generators. For product families those
are indexed by how many times each level-1 generator is used.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from stein_lab.classical.symmetric import SymmetricDistribution, iid_type_masses
from stein_lab.config import get_tolerances
from stein_lab.divergences.hull_classical import (
    d_H_to_hull_classical,
    d_max_smoothed_to_hull_classical,
    rel_ent_to_hull_classical,
)
from stein_lab.divergences.result import ClassicalDistribution, as_float
from stein_lab.errors import PreconditionError, SizeGuardError, ValidationError
from stein_lab.free_sets.builders import build_product_family
from stein_lab.free_sets.family import ConstructionRule, FreeFamily
from stein_lab.hypergeometric import bosonic_entropy
from stein_lab.classical.typicality import typical_radius
from stein_lab.typeclasses import TypeVector, count_matrix, type_index
from stein_lab.verdicts import CheckRecord, inequality

logger = logging.getLogger(__name__)


def _convolve_types(a: np.ndarray, n_a: int, b: np.ndarray, n_b: int, k: int) -> np.ndarray:
    """Type law of the concatenation of independent symmetric blocks."""
    counts_a, counts_b = count_matrix(n_a, k), count_matrix(n_b, k)
    index = type_index(n_a + n_b, k)
    out = np.zeros(len(index))
    for i in np.flatnonzero(a):
        for j in np.flatnonzero(b):
            out[index[TypeVector(n_a + n_b, tuple(counts_a[i] + counts_b[j]))]] += a[i] * b[j]
    return out


def symmetrized_product_generators(level1: Sequence[np.ndarray], n: int) -> list[np.ndarray]:
    """
    Type-class masses of the symmetrised products q_{i_1} ⊗ ... ⊗ q_{i_n},
    one per multiset of generator indices.
    """
    k = level1[0].size
    gens = [np.asarray(q, dtype=float) for q in level1]
    requested = math.comb(n + len(gens) - 1, len(gens) - 1)
    if requested > get_tolerances().enumeration_guard:
        raise SizeGuardError("symmetrised product generators", requested=requested, limit=get_tolerances().enumeration_guard)
    blocks = {(j, c): iid_type_masses(gens[j], c) for j in range(len(gens)) for c in range(1, n + 1)}
    out = []
    for usage in itertools.product(range(n + 1), repeat=len(gens)):
        if sum(usage) != n:
            continue
        law, length = None, 0
        for j, c in enumerate(usage):
            if c == 0:
                continue
            if law is None:
                law, length = blocks[(j, c)], c
            else:
                law = _convolve_types(law, length, blocks[(j, c)], c, k)
                length += c
        out.append(law / law.sum())
    return out


def type_space_generators(family: FreeFamily, n: int) -> list[np.ndarray]:
    """Level-n free generators of a classical family, as type-class masses."""
    if not family.is_classical():
        raise PreconditionError("family is not classical (off-diagonal generators)")
    if family.rule is ConstructionRule.PRODUCT:
        return symmetrized_product_generators(family.diagonal_generators(1), n)
    k = family.dim
    index = type_index(n, k)
    out = []
    for diag in family.diagonal_generators(n):
        masses = np.zeros(len(index))
        for flat, prob in enumerate(diag):
            if prob <= 0.0:
                continue
            seq = np.asarray(np.unravel_index(flat, [k] * n))
            masses[index[TypeVector(n, tuple(np.bincount(seq, minlength=k)))]] += prob
        out.append(masses / masses.sum())
    return out


def gsl_terms(n: int, alphabet_size: int, eps: float, eta: float, c: float) -> dict[str, float]:
    """Additive terms of the right-hand side beyond D_max^eps."""
    delta_n = typical_radius(n, alphabet_size, eta)
    return {
        "delta_n": delta_n,
        "log_inverse_slack": math.log2(1.0 / (1.0 - eps - eta)),
        "spill_term": 2.0 * n * bosonic_entropy((2.0 * delta_n + 1.0 / n) * alphabet_size),
        "resource_term": (2.0 * n * delta_n + 1.0) * alphabet_size * math.log2(1.0 / c),
    }


def check_classical_gsl(
    p: ClassicalDistribution,
    family: FreeFamily,
    n: int,
    eps: float,
    eta: float,
    *,
    name: str = "classical_gsl",
) -> CheckRecord:
    """
    D_max^eta(p^n || F_n) <= D_max^eps(p^n || F_n) + log 1/(1-eps-eta)
                              + 2n g((2 delta_n + 1/n)|X|) + (2 n delta_n + 1)|X| log 1/c
    """
    if not (0.0 < eps < 1.0 and 0.0 < eta < 1.0 and eps + eta < 1.0):
        raise ValidationError(f"need eps, eta in (0, 1) with eps + eta < 1, got ({eps}, {eta})", field="eps")
    if family.c <= 0.0:
        raise PreconditionError("family has no full-rank free state (c = 0)")
    if p.size != family.dim:
        raise ValidationError(f"p has {p.size} symbols, family has dim {family.dim}", field="p")
    started = time.perf_counter()

    source = SymmetricDistribution.iid(p, n).weights
    gens = type_space_generators(family, n)
    lhs = d_max_smoothed_to_hull_classical(source, gens, eta)
    base = d_max_smoothed_to_hull_classical(source, gens, eps)
    terms: dict[str, Any] = gsl_terms(n, p.size, eps, eta, family.c)
    extra = terms["log_inverse_slack"] + terms["spill_term"] + terms["resource_term"]
    rhs = (base.lower + extra, base.upper + extra)
    terms.update({"d_max_eps": base.as_float(), "d_max_eta": lhs.as_float(), "generators": len(gens)})

    certificates = {
        "lhs_duality_gap": float(lhs.certificate.get("duality_gap", 0.0)),
        "rhs_duality_gap": float(base.certificate.get("duality_gap", 0.0)),
    }
    record = inequality(name, lhs, rhs, terms=terms, certificates=certificates, detail=f"n={n} eps={eps:g} eta={eta:g}")
    logger.debug("classical_gsl n=%d generators=%d verdict=%s", n, len(gens), record.verdict.value)
    return record.with_runtime(time.perf_counter() - started)


def sample_product_family(rng: np.random.Generator, alphabet_size: int, extra: int = 2) -> FreeFamily:
    """Product family on the uniform distribution plus `extra` random level-1 distributions."""
    level1 = [np.full(alphabet_size, 1.0 / alphabet_size)]
    level1 += [rng.dirichlet(np.ones(alphabet_size)) for _ in range(extra)]
    return build_product_family([np.diag(q) for q in level1], 1)


def gsl_campaign_trial(
    seed: np.random.SeedSequence,
    index: Optional[int] = None,
    *,
    max_n: int = 12,
    max_alphabet: int = 2,
) -> CheckRecord:
    rng = np.random.default_rng(seed)
    k = int(rng.integers(2, max_alphabet + 1))
    n = int(rng.integers(2, max_n + 1))
    p = ClassicalDistribution(rng.dirichlet(np.ones(k)))
    family = sample_product_family(rng, k)
    eps = float(rng.uniform(0.05, 0.3))
    eta = float(rng.uniform(0.05, 0.3))
    name = "classical_gsl" if index is None else f"classical_gsl[{index}]"
    return check_classical_gsl(p, family, n, eps, eta, name=name)


# ---------------------------------------------------------------------
# FINITE-N RATES
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SteinEstimate:
    n: int
    hypothesis_rate: float
    relative_entropy_rate: float
    smoothed_max_rate: float
    duality_upper_ok: bool
    duality_lower_ok: bool

    def to_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def stein_estimate(p: ClassicalDistribution, family: FreeFamily, n: int, eps: float, eta: float) -> SteinEstimate:
    """
    (1/n) D_H^eps, (1/n) D and (1/n) D_max^eps of p^{⊗n} against F_n, plus
    the two duality relations

        D_max^eps <= D_H^{1-eps}           D_H^{1-eps-eta} + log eta <= D_max^eps
    """
    source = SymmetricDistribution.iid(p, n).weights
    gens = type_space_generators(family, n)
    tol = get_tolerances().certificate
    hypothesis = d_H_to_hull_classical(source, gens, eps)
    relative = rel_ent_to_hull_classical(source, gens)
    smoothed = d_max_smoothed_to_hull_classical(source, gens, eps)
    upper = d_H_to_hull_classical(source, gens, 1.0 - eps)
    lower = d_H_to_hull_classical(source, gens, 1.0 - eps - eta) if eps + eta < 1.0 else None
    upper_ok = smoothed.lower <= upper.upper + tol
    lower_ok = True if lower is None else lower.lower + math.log2(eta) <= smoothed.upper + tol
    return SteinEstimate(
        n=n,
        hypothesis_rate=as_float(hypothesis.value) / n,
        relative_entropy_rate=as_float(relative.value) / n,
        smoothed_max_rate=as_float(smoothed.value) / n,
        duality_upper_ok=bool(upper_ok),
        duality_lower_ok=bool(lower_ok),
    )
