"""
Spectral functions of Hermitian operators: positive part, square roots,
norms and fidelity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg as sla

from stein_lab.errors import ValidationError
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_hermitian, require_psd, require_state


def apply_hermitian_function(matrix: OperatorLike, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """f(X) = V f(Λ) V† for Hermitian X."""
    values, vectors = sla.eigh(require_hermitian(as_matrix(matrix)))
    return (vectors * fn(values)) @ vectors.conj().T


def psd_sqrt(matrix: OperatorLike) -> np.ndarray:
    # eigenvalues within -spectral of zero are clamped before rooting
    m = require_psd(as_matrix(matrix))
    return apply_hermitian_function(m, lambda v: np.sqrt(np.clip(v, 0.0, None)))


# ---------------------------------------------------------------------
# POSITIVE PART
# ---------------------------------------------------------------------

def trace_positive_part(matrix: OperatorLike) -> float:
    """Tr X_+ = sum of the positive eigenvalues."""
    values = np.linalg.eigvalsh(require_hermitian(as_matrix(matrix), "X"))
    return float(np.sum(values[values > 0.0]))


def positive_part(matrix: OperatorLike) -> np.ndarray:
    return apply_hermitian_function(matrix, lambda v: np.clip(v, 0.0, None))


@dataclass(frozen=True)
class PositivePartWitness:
    """
    Optimisers of both variational forms of Tr X_+:

        max { Tr QX : 0 <= Q <= 1 }   attained at the positive projector
        min { Tr Y  : Y >= 0, Y >= X } attained at X_+
    """

    value: float
    test: np.ndarray
    cover: np.ndarray

    def residuals(self, matrix: OperatorLike) -> dict[str, float]:
        """Constraint violations of both witnesses against X; all should be ~0."""
        x = as_matrix(matrix)
        q_spec = np.linalg.eigvalsh((self.test + self.test.conj().T) / 2)
        y_spec = np.linalg.eigvalsh((self.cover + self.cover.conj().T) / 2)
        gap_spec = np.linalg.eigvalsh(((self.cover - x) + (self.cover - x).conj().T) / 2)
        return {
            "test_lower": max(0.0, -float(q_spec[0])),
            "test_upper": max(0.0, float(q_spec[-1]) - 1.0),
            "cover_psd": max(0.0, -float(y_spec[0])),
            "cover_dominates": max(0.0, -float(gap_spec[0])),
            "test_value_gap": abs(float(np.trace(self.test @ x).real) - self.value),
            "cover_value_gap": abs(float(np.trace(self.cover).real) - self.value),
        }


def positive_part_witness(matrix: OperatorLike) -> PositivePartWitness:
    x = require_hermitian(as_matrix(matrix), "X")
    values, vectors = sla.eigh(x)
    mask = values > 0.0
    kept = vectors[:, mask]
    test = kept @ kept.conj().T
    cover = (kept * values[mask]) @ kept.conj().T
    return PositivePartWitness(value=float(np.sum(values[mask])), test=test, cover=cover)


# ---------------------------------------------------------------------
# NORMS AND DISTANCES
# ---------------------------------------------------------------------

def trace_norm(matrix: OperatorLike) -> float:
    return float(np.sum(np.linalg.svd(as_matrix(matrix), compute_uv=False)))


def operator_norm(matrix: OperatorLike) -> float:
    m = as_matrix(matrix)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def trace_distance(rho: OperatorLike, sigma: OperatorLike) -> float:
    """1/2 ||rho - sigma||_1"""
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}", field="sigma")
    return 0.5 * trace_norm(require_hermitian(a - b, "rho - sigma"))


def fidelity(rho: OperatorLike, sigma: OperatorLike) -> float:
    """F = ||sqrt(rho) sqrt(sigma)||_1 for states, clipped to [0, 1]."""
    r = require_state(as_matrix(rho), "rho")
    s = require_state(as_matrix(sigma), "sigma")
    value = trace_norm(psd_sqrt(r) @ psd_sqrt(s))
    return float(min(1.0, max(0.0, value)))


def root_overlap(rho: OperatorLike, sigma: OperatorLike) -> float:
    """Re Tr[sqrt(rho) sqrt(sigma)]; sits between 1 - trace distance and F."""
    return float(np.trace(psd_sqrt(rho) @ psd_sqrt(sigma)).real)


def smallest_eigenvalue(matrix: OperatorLike) -> float:
    m = require_hermitian(as_matrix(matrix))
    return float(np.linalg.eigvalsh(m)[0]) if m.size else 0.0
