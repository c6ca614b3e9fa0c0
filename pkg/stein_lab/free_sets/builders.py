"""
Constructors for free-set families.

    build_product_family   level n = all ordered n-fold products of level-1 generators
    build_sep_family       sampled pure product states on A:B plus a product basis
    build_explicit_family  generators given level by level (used for broken families)
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Mapping, Optional, Sequence

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import PreconditionError, SizeGuardError, ValidationError
from stein_lab.free_sets.family import ConstructionRule, FreeFamily, full_rank_constant
from stein_lab.linalg.functions import trace_distance
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_state
from stein_lab.linalg.sampling import random_pure_state
from stein_lab.linalg.tensor import tensor

logger = logging.getLogger(__name__)

DEDUP_DISTANCE = 1e-10
SEP_MAX_DIM = 16


def deduplicate(generators: Sequence[np.ndarray], threshold: float = DEDUP_DISTANCE) -> list[np.ndarray]:
    """Keep the first of every cluster of generators within trace distance threshold."""
    kept: list[np.ndarray] = []
    flats: list[np.ndarray] = []
    for g in generators:
        flat = g.reshape(-1)
        if flats:
            # ||X||_F <= ||X||_1, so only near pairs need the trace norm
            near = np.flatnonzero(np.linalg.norm(np.stack(flats) - flat, axis=1) <= 2.0 * threshold)
            if any(trace_distance(g, kept[i]) <= threshold for i in near):
                continue
        kept.append(g)
        flats.append(flat)
    return kept


def _product_levels(level1: Sequence[np.ndarray], max_level: int, d: int) -> tuple[dict[int, tuple[np.ndarray, ...]], dict[int, int]]:
    tol = get_tolerances()
    levels: dict[int, tuple[np.ndarray, ...]] = {1: tuple(level1)}
    raw = {1: len(level1)}
    for n in range(2, max_level + 1):
        requested = len(level1) ** n
        if requested > tol.enumeration_guard:
            raise SizeGuardError(f"products at level {n}", requested=requested, limit=tol.enumeration_guard)
        if d ** n > tol.dense_guard:
            raise SizeGuardError(f"dimension at level {n}", requested=d ** n, limit=tol.dense_guard)
        products = [tensor(*combo) for combo in itertools.product(level1, repeat=n)]
        raw[n] = len(products)
        levels[n] = tuple(deduplicate(products))
    return levels, raw


def build_product_family(level1_generators: Sequence[OperatorLike], max_level: int) -> FreeFamily:
    if max_level < 1:
        raise ValidationError("max_level must be at least 1", field="max_level")
    gens = [require_state(as_matrix(g), f"level1_generators[{i}]") for i, g in enumerate(level1_generators)]
    if not gens:
        raise ValidationError("no level-1 generators", field="level1_generators")
    d = gens[0].shape[0]
    gens = deduplicate(gens)
    c = full_rank_constant(gens)
    if c < get_tolerances().support:
        raise PreconditionError(f"level-1 generators have no full-rank mixture (lambda_min={c:.3e})")
    levels, raw = _product_levels(gens, max_level, d)
    logger.info("build_product_family d=%d generators=%d max_level=%d c=%.6f", d, len(gens), max_level, c)
    return FreeFamily(dim=d, levels=levels, rule=ConstructionRule.PRODUCT, c=c, raw_counts=raw)


def _computational_product_basis(dA: int, dB: int) -> list[np.ndarray]:
    out = []
    for i, j in itertools.product(range(dA), range(dB)):
        a = np.zeros((dA, dA), dtype=complex)
        b = np.zeros((dB, dB), dtype=complex)
        a[i, i] = b[j, j] = 1.0
        out.append(np.kron(a, b))
    return out


def build_sep_family(
    dA: int,
    dB: int,
    sample_count: int,
    seed: int,
    max_level: int = 1,
    *,
    include_basis: bool = True,
) -> FreeFamily:
    """
    Inner approximation of SEP(A:B): hull divergences computed against it
    are upper bounds on the true separable values.

    The basis comes first and samples are drawn one after another from a
    single generator, so families with more samples contain those with fewer.
    The designated full-rank mixture is the uniform mixture of the basis.
    """
    if dA < 1 or dB < 1 or dA * dB > SEP_MAX_DIM:
        raise ValidationError(f"dA*dB must lie in [1, {SEP_MAX_DIM}], got {dA}*{dB}", field="dA")
    if sample_count < (dA * dB) ** 2:
        raise ValidationError(f"sample_count must be at least (dA*dB)^2 = {(dA * dB) ** 2}", field="sample_count")

    rng = np.random.default_rng(seed)
    basis = _computational_product_basis(dA, dB) if include_basis else []
    samples = []
    for _ in range(sample_count):
        alpha = random_pure_state(dA, rng)
        beta = random_pure_state(dB, rng)
        ket = np.kron(alpha, beta)
        samples.append(np.outer(ket, ket.conj()))
    level1 = basis + samples

    d = dA * dB
    if include_basis:
        reference = np.zeros(len(level1))
        reference[: len(basis)] = 1.0 / len(basis)
    else:
        reference = np.full(len(level1), 1.0 / len(level1))
    c = full_rank_constant(level1, reference)
    # sites are (A_i B_i) pairs, so permutations of sites respect the A^n:B^n cut
    levels, raw = _product_levels(level1, max_level, d)
    logger.info("build_sep_family dA=%d dB=%d samples=%d seed=%d c=%.6f", dA, dB, sample_count, seed, c)
    return FreeFamily(
        dim=d,
        levels=levels,
        rule=ConstructionRule.SAMPLED_SEP,
        c=c,
        reference=reference,
        seed=seed,
        inner_approximation=True,
        raw_counts=raw,
    )


def build_explicit_family(dim: int, levels: Mapping[int, Sequence[OperatorLike]], reference: Optional[Sequence[float]] = None) -> FreeFamily:
    """Family given level by level; c is 0 when level 1 is absent or has no full-rank mixture."""
    mats = {int(n): tuple(as_matrix(g) for g in gens) for n, gens in levels.items()}
    ref = None if reference is None else np.asarray(reference, dtype=float)
    c = full_rank_constant(mats[1], ref) if 1 in mats else 0.0
    return FreeFamily(dim=dim, levels=mats, rule=ConstructionRule.EXPLICIT, c=c, reference=ref)


def universal_bound(family: FreeFamily, n: int) -> float:
    """n log2(1/c): D_max(rho_n || F_n) never exceeds it."""
    if family.c <= 0.0:
        return math.inf
    return n * math.log2(1.0 / family.c)


BROKEN_AXIOMS = ("A2", "A3", "A4", "A5")


def _projector(*amplitudes: float) -> np.ndarray:
    ket = np.asarray(amplitudes, dtype=complex)
    ket = ket / np.linalg.norm(ket)
    return np.outer(ket, ket.conj())


def build_broken_family(axiom: str) -> FreeFamily:
    """
    Two-level qubit family violating exactly one axiom:

        A2  level 1 = {|0><0|}, no full-rank mixture
        A3  Tr_last |00><00| = |0><0| is not in level 1 = {1/2}
        A4  |0><0| ⊗ |1><1| is not in level 2 = {|00><00|, |11><11|}
        A5  swapping the sites of (|0><0| ⊗ |+><+| + |1><1| ⊗ |-><-|)/2 leaves level 2
    """
    zero, one = _projector(1, 0), _projector(0, 1)
    half = np.eye(2) / 2.0
    if axiom == "A2":
        levels = {1: [zero], 2: [tensor(zero, zero)]}
    elif axiom == "A3":
        levels = {1: [half], 2: [np.eye(4) / 4.0, tensor(zero, zero)]}
    elif axiom == "A4":
        levels = {1: [zero, one], 2: [tensor(zero, zero), tensor(one, one)]}
    elif axiom == "A5":
        twisted = (tensor(zero, _projector(1, 1)) + tensor(one, _projector(1, -1))) / 2.0
        levels = {1: [half], 2: [np.eye(4) / 4.0, twisted]}
    else:
        raise ValidationError(f"no broken family for axiom {axiom!r}; choose from {list(BROKEN_AXIOMS)}", field="axiom")
    return build_explicit_family(2, levels)
