"""
Norm estimates for the blurring map on the high-occupation sector:
the d_r decay bound, tail filtering by a contraction with an invariant
subspace, and the resulting output-norm bound.
"""

from __future__ import annotations

import logging
import math
import time
from typing import Optional

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import ValidationError
from stein_lab.linalg import as_matrix, operator_norm, trace_norm
from stein_lab.linalg.operators import OperatorLike, hermiticity_residual, require_square
from stein_lab.linalg.sampling import random_hermitian, random_unitary
from stein_lab.quantum.blurring import appended_copies, blur_q
from stein_lab.quantum.decomposition import d_r_bound, d_r_diag
from stein_lab.quantum.symmetric import SymTypeOperator
from stein_lab.typeclasses import count_matrix
from stein_lab.verdicts import CheckRecord, inapplicable, inequality

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------
# D_r DECAY
# ---------------------------------------------------------------------

def max_excitation(n: int, d: int) -> np.ndarray:
    """max_{x != 0} n t(x) for every type in enumerate_types order."""
    counts = count_matrix(n, d)
    if d < 2:
        return np.zeros(counts.shape[0], dtype=np.int64)
    return counts[:, 1:].max(axis=1)


def check_d_r_bound(n: int, r: int, d: int, *, eta: Optional[float] = None, N: Optional[int] = None) -> CheckRecord:
    """
    If eta <= r/n <= 1 - eta and n t(x) >= N for some x != 0, then
    d_r(t) <= 3 exp(-N eta^2 / 2). Checked on every type that meets the
    excitation hypothesis; lhs is the worst d_r(t) - bound.
    """
    name = f"d_r_bound[n={n},r={r},d={d}]"
    eta = min(r / n, 1.0 - r / n, 0.5) if eta is None else eta
    if not (0.0 < eta <= 0.5 and eta <= r / n <= 1.0 - eta):
        return inapplicable(name, f"eta={eta:g} outside the window of r/n={r / n:g}", eta=eta)
    diag = d_r_diag(n, r, d)
    excitation = max_excitation(n, d)
    if N is None:
        bounds = np.array([d_r_bound(int(m), eta) for m in excitation])
        admissible = np.ones(diag.size, dtype=bool)
    else:
        bounds = np.full(diag.size, d_r_bound(N, eta))
        admissible = excitation >= N
    if not np.any(admissible):
        return inapplicable(name, f"no type with excitation >= {N}", N=N)
    gap = diag[admissible] - bounds[admissible]
    worst = int(np.argmax(gap))
    return inequality(
        name,
        float(gap[worst]),
        0.0,
        terms={"eta": eta, "d_r": float(diag[admissible][worst]), "bound": float(bounds[admissible][worst]), "types_checked": int(admissible.sum())},
        tol=get_tolerances().spectral,
    )


def d_r_bound_sweep(n_max: int, d: int = 2, n_min: int = 2) -> list[CheckRecord]:
    """Every (n, r) with n_min <= n <= n_max and 0 < r < n."""
    return [check_d_r_bound(n, r, d) for n in range(n_min, n_max + 1) for r in range(1, n)]


# ---------------------------------------------------------------------
# TAIL FILTERING
# ---------------------------------------------------------------------

def _orthonormal_basis(V: OperatorLike, dim: int) -> np.ndarray:
    v = np.asarray(V, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    if v.shape[0] != dim:
        raise ValidationError(f"subspace basis has {v.shape[0]} rows, operator has dim {dim}", field="V")
    if v.shape[1] == 0:
        return v
    q, r = np.linalg.qr(v)
    keep = np.abs(np.diag(r)) > get_tolerances().support
    return q[:, keep]


def check_tail_filtering(T: OperatorLike, V: OperatorLike, Z: OperatorLike, *, name: str = "tail_filtering") -> CheckRecord:
    """
    T Hermitian with ||T|| = 1 and T V ⊆ V, Z with P_V Z P_V = 0:

        ||T Z T||_1 <= (1 - (1 - mu)^2) ||Z||_1,   mu = ||(1 - P_V) T||
    """
    started = time.perf_counter()
    tol = get_tolerances()
    t = require_square(as_matrix(T), "T")
    z = require_square(as_matrix(Z), "Z")
    if z.shape != t.shape:
        raise ValidationError(f"shape mismatch {t.shape} vs {z.shape}", field="Z")
    dim = t.shape[0]
    q = _orthonormal_basis(V, dim)
    p = q @ q.conj().T
    outside = np.eye(dim) - p

    residuals = {
        "hermiticity": hermiticity_residual(t),
        "norm_one": abs(operator_norm(t) - 1.0),
        "invariance": float(np.max(np.abs(outside @ t @ p), initial=0.0)),
        "vanishing_block": float(np.max(np.abs(p @ z @ p), initial=0.0)),
    }
    failed = [key for key, value in residuals.items() if value > tol.witness]
    if failed:
        return inapplicable(name, "hypothesis fails: " + ", ".join(failed), **residuals)
    mu = operator_norm(outside @ t)
    if mu >= 1.0:
        return inapplicable(name, f"mu={mu:g} is not below 1", mu=mu)

    z_norm = trace_norm(z)
    lhs = trace_norm(t @ z @ t)
    factor = 1.0 - (1.0 - mu) ** 2
    record = inequality(name, lhs, factor * z_norm, terms={"mu": mu, "factor": factor, "z_norm": z_norm}, certificates=residuals)
    return record.with_runtime(time.perf_counter() - started)


def random_tail_filtering_instance(
    dim: int, vdim: int, mu0: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    T = U diag(a) U† with |a| <= 1 on V (one entry ±1) and |a| <= mu0 off V;
    V spans the first vdim columns of U. Z = W - P W P for a random Hermitian W.
    """
    if not (0 < vdim < dim and 0.0 <= mu0 < 1.0):
        raise ValidationError(f"need 0 < vdim < dim and mu0 in [0, 1), got ({vdim}, {dim}, {mu0})", field="vdim")
    u = random_unitary(dim, rng)
    inside = rng.uniform(-1.0, 1.0, size=vdim)
    inside[rng.integers(vdim)] = rng.choice([-1.0, 1.0])
    outside = rng.uniform(-mu0, mu0, size=dim - vdim)
    t = u @ np.diag(np.concatenate([inside, outside])) @ u.conj().T
    t = (t + t.conj().T) / 2
    basis = u[:, :vdim]
    p = basis @ basis.conj().T
    w = random_hermitian(dim, rng)
    return t, basis, w - p @ w @ p


# ---------------------------------------------------------------------
# OUTPUT NORM
# ---------------------------------------------------------------------

def low_block_mask(n: int, d: int, N: int) -> np.ndarray:
    """Types with max_{x != 0} n t(x) <= N."""
    return max_excitation(n, d) <= N


def output_norm_factor(n: int, N: int, delta: float) -> float:
    """2 (exp(-n delta/18) + sqrt(3) exp(-N delta^2/16))."""
    return 2.0 * (math.exp(-n * delta / 18.0) + math.sqrt(3.0) * math.exp(-N * delta * delta / 16.0))


def check_output_norm(n: int, N: int, delta: float, X: SymTypeOperator, *, name: str = "output_norm") -> CheckRecord:
    """
    <n,t|X|n,s> = 0 whenever both t and s lie in the low block
    max_{x != 0} n t(x) <= N implies

        ||blur_q(X)||_1 <= 2 (e^{-n delta/18} + sqrt(3) e^{-N delta^2/16}) ||X||_1
    """
    started = time.perf_counter()
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    k = appended_copies(n, delta)
    low = low_block_mask(n, X.d, N)
    residual = float(np.max(np.abs(X.matrix[np.ix_(low, low)]), initial=0.0))
    if residual > get_tolerances().witness:
        return inapplicable(name, f"X does not vanish on the low block (residual {residual:.3g})", low_block_residual=residual)

    x_norm = X.trace_norm()
    lhs = blur_q(n, delta, X).trace_norm()
    factor = output_norm_factor(n, N, delta)
    record = inequality(
        name,
        lhs,
        factor * x_norm,
        terms={"k": k, "factor": factor, "x_norm": x_norm, "low_types": int(low.sum())},
        certificates={"low_block_residual": residual},
        detail=f"n={n} N={N} delta={delta:g}",
    )
    return record.with_runtime(time.perf_counter() - started)


def random_deficient_operator(n: int, d: int, N: int, rng: np.random.Generator) -> SymTypeOperator:
    """Random Hermitian type-basis operator with its low block zeroed."""
    low = low_block_mask(n, d, N)
    x = random_hermitian(low.size, rng)
    x[np.ix_(low, low)] = 0.0
    return SymTypeOperator(n, d, x)
