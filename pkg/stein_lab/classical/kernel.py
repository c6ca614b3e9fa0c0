"""
The classical blurring map on type space.

B_{n,m} appends m copies of every symbol, shuffles uniformly and keeps n
symbols. On types this is an urn draw:

    K[t | u] = H_{n + m|X|, v_u; n}(t),   (n + m|X|) v_u(x) = n u(x) + m
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from stein_lab.classical.symmetric import SymmetricDistribution
from stein_lab.config import get_tolerances
from stein_lab.errors import SizeGuardError, ValidationError
from stein_lab.hypergeometric import bosonic_entropy, multivariate_pmf_exact, multivariate_pmf_table
from stein_lab.typeclasses import TypeVector, count_matrix, enumerate_types, type_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlurKernel:
    """Column-stochastic matrix K[t | u], rows and columns in enumerate_types order."""

    n: int
    m: int
    alphabet_size: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        size = len(enumerate_types(self.n, self.alphabet_size))
        if self.matrix.shape != (size, size):
            raise ValidationError(f"kernel shape {self.matrix.shape}, expected {(size, size)}", field="matrix")
        mat = np.array(self.matrix, dtype=float, copy=True)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def column(self, u: TypeVector) -> np.ndarray:
        return self.matrix[:, type_index(self.n, self.alphabet_size)[u]]

    def stochasticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix.sum(axis=0) - 1.0)))

    def support_violations(self) -> int:
        """Entries K[t|u] > 0 with n t not dominated by n u + m."""
        counts = count_matrix(self.n, self.alphabet_size)
        allowed = np.all(counts[:, None, :] <= counts[None, :, :] + self.m, axis=-1)
        return int(np.count_nonzero((self.matrix > 0.0) & ~allowed))


def _check_sizes(n: int, m: int, alphabet_size: int) -> None:
    if n < 1 or m < 0 or alphabet_size < 1:
        raise ValidationError(f"invalid (n, m, |X|) = ({n}, {m}, {alphabet_size})", field="n")
    size = math.comb(n + alphabet_size - 1, alphabet_size - 1)
    limit = get_tolerances().enumeration_guard
    if size * size > limit:
        raise SizeGuardError(f"blur kernel over {size} types", requested=size * size, limit=limit)


def blur_kernel(n: int, m: int, alphabet_size: int) -> BlurKernel:
    _check_sizes(n, m, alphabet_size)
    counts = count_matrix(n, alphabet_size)
    if m == 0:
        return BlurKernel(n, 0, alphabet_size, np.eye(counts.shape[0]))
    total = n + m * alphabet_size
    table = multivariate_pmf_table(total, counts + m, n, counts)
    logger.debug("blur_kernel n=%d m=%d alphabet=%d types=%d", n, m, alphabet_size, counts.shape[0])
    return BlurKernel(n, m, alphabet_size, table)


def blur_kernel_exact(n: int, m: int, alphabet_size: int) -> list[list[Fraction]]:
    """Rational kernel; rows t, columns u."""
    _check_sizes(n, m, alphabet_size)
    types = enumerate_types(n, alphabet_size)
    total = n + m * alphabet_size
    urns = [TypeVector(total, tuple(c + m for c in u.counts)) for u in types]
    return [[multivariate_pmf_exact(total, urn, n, t) for urn in urns] for t in types]


def apply_blur(kernel: BlurKernel, p: SymmetricDistribution) -> SymmetricDistribution:
    if (p.n, p.alphabet_size) != (kernel.n, kernel.alphabet_size):
        raise ValidationError(
            f"distribution on (n={p.n}, |X|={p.alphabet_size}) vs kernel on (n={kernel.n}, |X|={kernel.alphabet_size})",
            field="p",
        )
    out = kernel.matrix @ p.weights
    return SymmetricDistribution(p.n, p.alphabet_size, out / out.sum())


def blur_m(n: int, delta: float) -> int:
    """m = ceil(2 delta n)."""
    return math.ceil(2.0 * delta * n - 1e-12)


def spill_bound(n: int, delta: float, alphabet_size: int) -> float:
    """2^{-n g((2 delta + 1/n)|X|)}, the floor of K[t|u] for t, u in a common delta-ball."""
    return 2.0 ** (-n * bosonic_entropy((2.0 * delta + 1.0 / n) * alphabet_size))


# ---------------------------------------------------------------------
# SEQUENCE-LEVEL ORACLE
# ---------------------------------------------------------------------

def blur_sequences_exact(
    probabilities: Mapping[tuple[int, ...], Fraction],
    n: int,
    m: int,
    alphabet_size: int,
) -> dict[tuple[int, ...], Fraction]:
    """
    Append m copies of each symbol, average over all N! orderings (as the
    uniform law on distinct arrangements), discard all but the first n.
    Exact rational arithmetic throughout.
    """
    total = n + m * alphabet_size
    if alphabet_size ** total > get_tolerances().enumeration_guard:
        raise SizeGuardError("sequence oracle", requested=alphabet_size ** total, limit=get_tolerances().enumeration_guard)
    arrangements: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    out: dict[tuple[int, ...], Fraction] = {}
    for seq, prob in probabilities.items():
        if len(seq) != n:
            raise ValidationError(f"sequence {seq} has length {len(seq)}, expected {n}", field="probabilities")
        if prob == 0:
            continue
        counts = tuple(seq.count(x) + m for x in range(alphabet_size))
        if counts not in arrangements:
            arrangements[counts] = [
                z for z in itertools.product(range(alphabet_size), repeat=total)
                if all(z.count(x) == counts[x] for x in range(alphabet_size))
            ]
        rows = arrangements[counts]
        share = Fraction(prob) / len(rows)
        for z in rows:
            kept = z[:n]
            out[kept] = out.get(kept, Fraction(0)) + share
    return out
