"""
Quantum blurring maps.

    blur_q(n, delta, X)        = sum_r H(n+k, k; n, r) Gamma_{n,r}(X),  k = floor(delta n)
    blur_rho(n, delta, rho, X) = Tr_k S_{n+k}(X ⊗ rho^{⊗k})

blur_q acts on the type basis of Sym^n. blur_rho is the dense map on
(C^d)^{⊗n}; for rho = |0><0| and X supported on Sym^n the two agree after
projecting onto Sym^n.
"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import PreconditionError, SizeGuardError, ValidationError
from stein_lab.hypergeometric import hyp_pmf_vector
from stein_lab.linalg import as_matrix, symmetric_projector, symmetrize, tensor, tensor_power, trace_out_last
from stein_lab.linalg.operators import OperatorLike, require_square
from stein_lab.quantum.decomposition import gamma
from stein_lab.quantum.symmetric import SymTypeOperator

logger = logging.getLogger(__name__)

FLOOR_SLACK = 1e-9


def check_delta(delta: float) -> None:
    if not 0.0 < delta <= 0.5:
        raise PreconditionError("delta must be in (0, 1/2]")


def appended_copies(n: int, delta: float) -> int:
    """k = floor(delta n), robust to delta n landing a rounding error below an integer."""
    check_delta(delta)
    return int(math.floor(delta * n + FLOOR_SLACK))


def mixing_weights(n: int, k: int) -> np.ndarray:
    """H(n+k, k; n, r) for r = 0..k; sums to 1."""
    if k < 0 or k > n:
        raise ValidationError(f"need 0 <= k <= n, got k={k}, n={n}", field="k")
    return hyp_pmf_vector(n + k, k, n)[: k + 1]


# ---------------------------------------------------------------------
# TYPE BASIS
# ---------------------------------------------------------------------

def blur_k(n: int, k: int, X: SymTypeOperator) -> SymTypeOperator:
    """blur_q with k appended copies given directly."""
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    if k == 0:
        return X
    out = np.zeros_like(X.matrix)
    for r, weight in enumerate(mixing_weights(n, k)):
        if weight == 0.0:
            continue
        out += weight * gamma(n, r, X).matrix
    return SymTypeOperator(n, X.d, out)


def blur_q(n: int, delta: float, X: SymTypeOperator) -> SymTypeOperator:
    return blur_k(n, appended_copies(n, delta), X)


def blurring_average_weights(n: int, Delta: float) -> dict[int, float]:
    """
    (1/Delta) int_0^Delta d delta of a map that depends on delta only through
    k = floor(delta n), as weights over k. Each weight is the length of
    [k/n, (k+1)/n) ∩ (0, Delta] divided by Delta.
    """
    check_delta(Delta)
    if n < 1:
        raise ValidationError("n must be positive", field="n")
    out: dict[int, float] = {}
    k_max = appended_copies(n, Delta)
    for k in range(k_max + 1):
        length = min((k + 1) / n, Delta) - k / n
        if length > FLOOR_SLACK / n:
            out[k] = length / Delta
    return out


def blur_q_average(n: int, Delta: float, X: SymTypeOperator) -> SymTypeOperator:
    out = np.zeros_like(X.matrix)
    for k, weight in blurring_average_weights(n, Delta).items():
        out += weight * blur_k(n, k, X).matrix
    return SymTypeOperator(n, X.d, out)


# ---------------------------------------------------------------------
# DENSE
# ---------------------------------------------------------------------

def _check_dense(d: int, total: int) -> None:
    limit = get_tolerances().dense_guard
    if d ** total > limit:
        raise SizeGuardError(f"dense space ({d})^{total}", requested=d ** total, limit=limit)


def _site_dim(rho: OperatorLike) -> tuple[np.ndarray, int]:
    r = require_square(as_matrix(rho), "rho")
    return r, r.shape[0]


def blur_rho_k(n: int, k: int, rho: OperatorLike, X: OperatorLike) -> np.ndarray:
    r, d = _site_dim(rho)
    x = require_square(as_matrix(X), "X")
    if x.shape[0] != d ** n:
        raise ValidationError(f"X has dim {x.shape[0]}, expected {d}^{n}", field="X")
    _check_dense(d, n + k)
    if k == 0:
        return symmetrize(x, d, n)
    joint = symmetrize(tensor(x, tensor_power(r, k)), d, n + k)
    return trace_out_last(joint, d, n + k, k)


def blur_rho(n: int, delta: float, rho: OperatorLike, X: OperatorLike) -> np.ndarray:
    return blur_rho_k(n, appended_copies(n, delta), rho, X)


def blur_rho_average(n: int, Delta: float, rho: OperatorLike, X: OperatorLike) -> np.ndarray:
    out: Optional[np.ndarray] = None
    for k, weight in blurring_average_weights(n, Delta).items():
        term = weight * blur_rho_k(n, k, rho, X)
        out = term if out is None else out + term
    return out


# ---------------------------------------------------------------------
# ORACLES
# ---------------------------------------------------------------------

def gamma_dense(n: int, r: int, X: OperatorLike, d: int) -> np.ndarray:
    """Pi_n (|0><0|^{⊗r} ⊗ Tr_r X) Pi_n on the full tensor space."""
    x = require_square(as_matrix(X), "X")
    _check_dense(d, n)
    if r == 0:
        proj = symmetric_projector(d, n)
        return proj @ x @ proj
    zero = np.zeros((d, d), dtype=complex)
    zero[0, 0] = 1.0
    reduced = trace_out_last(x, d, n, r)
    lifted = tensor(tensor_power(zero, r), reduced)
    proj = symmetric_projector(d, n)
    return proj @ lifted @ proj


def blur_q_dense(n: int, delta: float, X: OperatorLike, d: int) -> np.ndarray:
    """Pi_n blur_rho(|0><0|)(X) Pi_n."""
    zero = np.zeros((d, d), dtype=complex)
    zero[0, 0] = 1.0
    proj = symmetric_projector(d, n)
    return proj @ blur_rho(n, delta, zero, X) @ proj
