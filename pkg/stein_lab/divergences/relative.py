"""
Umegaki relative entropy and max-relative entropy, in bits.

Support violations (sigma below the support threshold where rho carries
more than the support mass) give Infinity.POSITIVE.
"""

from __future__ import annotations

import logging
import math
from typing import Union

import numpy as np
from scipy import linalg as sla
from scipy.special import xlogy

from stein_lab.config import get_tolerances
from stein_lab.divergences.result import ClassicalDistribution, Infinity, Value
from stein_lab.errors import ValidationError
from stein_lab.linalg.operators import OperatorLike, as_matrix, require_state

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

StateLike = Union[OperatorLike, ClassicalDistribution]


def _state(x: StateLike, name: str) -> np.ndarray:
    if isinstance(x, ClassicalDistribution):
        return x.as_operator()
    return require_state(as_matrix(x), name)


def _probabilities(x: Union[ClassicalDistribution, np.ndarray]) -> np.ndarray:
    if isinstance(x, ClassicalDistribution):
        return np.asarray(x.weights, dtype=float)
    return ClassicalDistribution(np.asarray(x, dtype=float)).weights


def support_split(sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(eigenvalues on supp, eigenvectors on supp, eigenvectors of the kernel)."""
    values, vectors = sla.eigh(sigma)
    inside = values >= get_tolerances().support
    return values[inside], vectors[:, inside], vectors[:, ~inside]


def mass_outside_support(rho: np.ndarray, kernel: np.ndarray) -> float:
    if kernel.shape[1] == 0:
        return 0.0
    return float(np.real(np.trace(kernel.conj().T @ rho @ kernel)))


# ---------------------------------------------------------------------
# QUANTUM
# ---------------------------------------------------------------------

def umegaki(rho: StateLike, sigma: StateLike) -> Value:
    """D(rho||sigma) = Tr rho (log rho - log sigma)."""
    r = _state(rho, "rho")
    s = _state(sigma, "sigma")
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}", field="sigma")

    s_vals, s_vecs, kernel = support_split(s)
    if mass_outside_support(r, kernel) > get_tolerances().support_mass:
        return Infinity.POSITIVE

    r_vals, r_vecs = sla.eigh(r)
    r_vals = np.clip(r_vals, 0.0, None)
    entropy_term = float(np.sum(xlogy(r_vals, r_vals)))
    # sum_{i,j} r_i |<a_i|b_j>|^2 log s_j
    overlaps = np.abs(r_vecs.conj().T @ s_vecs) ** 2
    cross_term = float(r_vals @ overlaps @ np.log(s_vals))
    # nonnegative for normalised states; clip rounding noise
    return max(0.0, (entropy_term - cross_term) / LN2)


def d_max(rho: StateLike, sigma: StateLike) -> Value:
    """log2 of the top eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on supp sigma."""
    r = _state(rho, "rho")
    s = _state(sigma, "sigma")
    if r.shape != s.shape:
        raise ValidationError(f"shape mismatch {r.shape} vs {s.shape}", field="sigma")

    s_vals, s_vecs, kernel = support_split(s)
    if mass_outside_support(r, kernel) > get_tolerances().support_mass:
        return Infinity.POSITIVE
    inv_root = s_vecs / np.sqrt(s_vals)
    sandwiched = inv_root.conj().T @ r @ inv_root
    sandwiched = (sandwiched + sandwiched.conj().T) / 2
    top = float(np.linalg.eigvalsh(sandwiched)[-1])
    return math.log2(top)


# ---------------------------------------------------------------------
# CLASSICAL
# ---------------------------------------------------------------------

def relative_entropy_classical(p: Union[ClassicalDistribution, np.ndarray], q: Union[ClassicalDistribution, np.ndarray]) -> Value:
    pv, qv = _probabilities(p), _probabilities(q)
    if pv.shape != qv.shape:
        raise ValidationError("label spaces differ", field="q")
    tol = get_tolerances()
    if np.any((qv < tol.support) & (pv > tol.support_mass)):
        return Infinity.POSITIVE
    mask = (pv > 0) & (qv >= tol.support)
    return float(np.sum(pv[mask] * np.log2(pv[mask] / qv[mask])))


def d_max_classical(p: Union[ClassicalDistribution, np.ndarray], q: Union[ClassicalDistribution, np.ndarray]) -> Value:
    """log2 max_x p(x)/q(x)."""
    pv, qv = _probabilities(p), _probabilities(q)
    if pv.shape != qv.shape:
        raise ValidationError("label spaces differ", field="q")
    tol = get_tolerances()
    if np.any((qv < tol.support) & (pv > tol.support_mass)):
        return Infinity.POSITIVE
    mask = (pv > 0) & (qv >= tol.support)
    return float(math.log2(np.max(pv[mask] / qv[mask])))
