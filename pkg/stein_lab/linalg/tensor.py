"""
Tensor products, partial traces, permutation actions and symmetric
purifications on (C^d)^{⊗N}.

Sites are ordered most-significant first, matching numpy.kron.
"""

from __future__ import annotations

import itertools
import logging
import math
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import SizeGuardError, ValidationError
from stein_lab.linalg.functions import psd_sqrt
from stein_lab.linalg.operators import OperatorLike, StateVector, as_matrix, require_psd, require_square

logger = logging.getLogger(__name__)


def tensor(*operators: OperatorLike) -> np.ndarray:
    if not operators:
        raise ValidationError("tensor of nothing", field="operators")
    return reduce(np.kron, (as_matrix(op) for op in operators))


def tensor_power(operator: OperatorLike, n: int) -> np.ndarray:
    if n < 0:
        raise ValidationError("negative tensor power", field="n")
    m = as_matrix(operator)
    if n == 0:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [m] * n)


def partial_trace(matrix: OperatorLike, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in keep; kept order is preserved."""
    m = require_square(as_matrix(matrix), "X")
    dims = [int(d) for d in dims]
    if math.prod(dims) != m.shape[0]:
        raise ValidationError(f"dims {dims} do not multiply to {m.shape[0]}", field="dims")
    kept = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in kept):
        raise ValidationError(f"keep {kept} out of range for {len(dims)} subsystems", field="keep")

    n = len(dims)
    rows = list(range(n))
    cols = [n + i if i in kept else i for i in range(n)]
    out_idx = kept + [n + i for i in kept]
    reshaped = m.reshape(dims + dims)
    out = np.einsum(reshaped, rows + cols, out_idx)
    size = math.prod(dims[i] for i in kept)
    return out.reshape(size, size)


def trace_out_last(matrix: OperatorLike, d: int, total: int, k: int) -> np.ndarray:
    """Tr over the last k of total sites of dimension d."""
    return partial_trace(matrix, [d] * total, range(total - k))


# ---------------------------------------------------------------------
# PERMUTATIONS
# ---------------------------------------------------------------------

def _site_index_map(d: int, perm: Sequence[int]) -> np.ndarray:
    # U_pi |x_1..x_N> = |x_{pi^-1(1)}..>, as a gather on computational indices
    grid = np.arange(d ** len(perm)).reshape([d] * len(perm))
    return np.transpose(grid, perm).reshape(-1)


@lru_cache(maxsize=16)
def _permutation_index_maps(d: int, N: int) -> tuple[np.ndarray, ...]:
    maps = []
    for perm in itertools.permutations(range(N)):
        index = _site_index_map(d, perm)
        index.setflags(write=False)
        maps.append(index)
    logger.debug("permutation_cache_fill d=%d N=%d count=%d", d, N, len(maps))
    return tuple(maps)


def _check_symmetrize_size(d: int, N: int) -> None:
    requested = math.factorial(N) * d ** N
    limit = get_tolerances().symmetrize_guard
    if requested > limit:
        raise SizeGuardError(
            f"symmetrize over S_{N} on (C^{d})^{N} is intractable",
            requested=requested,
            limit=limit,
        )


def permute_operator(matrix: OperatorLike, d: int, perm: Sequence[int]) -> np.ndarray:
    """U_pi X U_pi^dagger."""
    m = as_matrix(matrix)
    index = _site_index_map(d, perm)
    if index.size != m.shape[0]:
        raise ValidationError("permutation does not match operator size", field="perm")
    return m[np.ix_(index, index)]


def symmetrize(matrix: OperatorLike, d: int, N: int) -> np.ndarray:
    """(1/N!) sum over pi of U_pi X U_pi^dagger."""
    m = require_square(as_matrix(matrix), "X")
    if m.shape[0] != d ** N:
        raise ValidationError(f"operator has dim {m.shape[0]}, expected {d}^{N}", field="X")
    if N <= 1:
        return m.copy()
    _check_symmetrize_size(d, N)
    maps = _permutation_index_maps(d, N)
    out = np.zeros_like(m)
    for index in maps:
        out += m[np.ix_(index, index)]
    return out / len(maps)


def symmetric_projector(d: int, N: int) -> np.ndarray:
    """Projector onto Sym^N(C^d), as the average of permutation unitaries."""
    if N <= 1:
        return np.eye(d ** max(N, 0), dtype=complex)
    _check_symmetrize_size(d, N)
    dim = d ** N
    out = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    maps = _permutation_index_maps(d, N)
    for index in maps:
        out[rows, index] += 1.0
    return out / len(maps)


def permutation_invariance_residual(matrix: OperatorLike, d: int, N: int) -> float:
    """Largest entrywise change under adjacent transpositions (which generate S_N)."""
    m = as_matrix(matrix)
    worst = 0.0
    for i in range(N - 1):
        perm = list(range(N))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        worst = max(worst, float(np.max(np.abs(permute_operator(m, d, perm) - m))))
    return worst


# ---------------------------------------------------------------------
# SYMMETRIC PURIFICATION
# ---------------------------------------------------------------------

def purify_symmetric(omega: OperatorLike, d: int, n: int) -> StateVector:
    """
    (sqrt(omega) ⊗ 1)|Phi>^{⊗n} with |Phi> = sum_i |ii> unnormalised.

    The result lives on (C^d ⊗ C^d)^{⊗n}, each site an (A_i, E_i) pair, and
    is invariant under permutations of the pairs whenever omega is.
    """
    m = require_psd(as_matrix(omega), "omega")
    if m.shape[0] != d ** n:
        raise ValidationError(f"omega has dim {m.shape[0]}, expected {d}^{n}", field="omega")
    residual = permutation_invariance_residual(m, d, n)
    if residual > get_tolerances().normalization:
        raise ValidationError("omega is not permutation-invariant", field="omega", residual=residual)

    amplitudes = psd_sqrt(m).reshape([d] * (2 * n))
    # axes (a_1..a_n, e_1..e_n) -> (a_1, e_1, ..., a_n, e_n)
    order = [axis for i in range(n) for axis in (i, n + i)]
    return StateVector(np.transpose(amplitudes, order).reshape(-1))


def purification_overlap(psi: StateVector, phi: StateVector) -> float:
    return float(psi.inner(phi).real)
