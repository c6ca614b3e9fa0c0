"""
Pure loss and damping on truncated Fock space.

    E_lambda(|h><k|) = sum_{l <= min(h,k)} sqrt(C(h,l) C(k,l)) lambda^{(h+k)/2 - l} (1-lambda)^l |h-l><k-l|
    D_mu(|h><k|)     = mu^{|h|+|k|} |h><k|

Neither map raises an occupation number, so both act exactly on a
truncated space: any slack comes from truncating the input.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import comb

from stein_lab.errors import ValidationError
from stein_lab.fock.operators import FockOperator, total_occupation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LossParams:
    """lambda = 1/(1 + delta(1+delta)), mu = sqrt(1 + delta(1+delta)) / (1+delta)."""

    delta: float

    def __post_init__(self) -> None:
        if self.delta <= 0.0:
            raise ValidationError(f"delta must be positive, got {self.delta}", field="delta")

    @property
    def lam(self) -> float:
        return 1.0 / (1.0 + self.delta * (1.0 + self.delta))

    @property
    def mu(self) -> float:
        return math.sqrt(1.0 + self.delta * (1.0 + self.delta)) / (1.0 + self.delta)

    def identity_residuals(self) -> dict[str, float]:
        """|sqrt(lambda) mu - 1/(1+delta)| and |1/lambda - 1 - delta(1+delta)|."""
        return {
            "attenuation": abs(math.sqrt(self.lam) * self.mu - 1.0 / (1.0 + self.delta)),
            "inverse_lambda": abs(1.0 / self.lam - 1.0 - self.delta * (1.0 + self.delta)),
        }


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise ValidationError(f"lambda must lie in (0, 1), got {lam}", field="lambda")


@lru_cache(maxsize=32)
def loss_superoperator(lam: float, cutoff: int) -> np.ndarray:
    """S[a, b, h, k]: coefficient of |a><b| in E_lambda(|h><k|) on one mode."""
    _check_lambda(lam)
    size = cutoff + 1
    out = np.zeros((size, size, size, size))
    for h in range(size):
        for k in range(size):
            for ell in range(min(h, k) + 1):
                out[h - ell, k - ell, h, k] = (
                    math.sqrt(comb(h, ell, exact=True) * comb(k, ell, exact=True))
                    * lam ** ((h + k) / 2.0 - ell)
                    * (1.0 - lam) ** ell
                )
    out.setflags(write=False)
    return out


def _per_mode(super_op: np.ndarray, X: FockOperator) -> FockOperator:
    tensor = X.as_tensor()
    m = X.modes
    for j in range(m):
        tensor = np.tensordot(super_op, tensor, axes=([2, 3], [j, m + j]))
        tensor = np.moveaxis(tensor, [0, 1], [j, m + j])
    return FockOperator.from_tensor(tensor, m, X.cutoff)


def pure_loss(lam: float, X: FockOperator) -> FockOperator:
    """E_lambda applied to every mode."""
    return _per_mode(loss_superoperator(float(lam), X.cutoff), X)


@lru_cache(maxsize=128)
def pure_loss_kraus(lam: float, cutoff: int) -> tuple[np.ndarray, ...]:
    """K_l = sum_h sqrt(C(h,l)) lambda^{(h-l)/2} (1-lambda)^{l/2} |h-l><h|, l = 0..cutoff."""
    _check_lambda(lam)
    h = np.arange(cutoff + 1)
    out = []
    for ell in range(cutoff + 1):
        k = np.zeros((cutoff + 1, cutoff + 1))
        src = h[h >= ell]
        k[src - ell, src] = np.sqrt(comb(src, ell)) * lam ** ((src - ell) / 2.0) * (1.0 - lam) ** (ell / 2.0)
        k.setflags(write=False)
        out.append(k)
    return tuple(out)


def kraus_completeness_residual(kraus: tuple[np.ndarray, ...]) -> float:
    """|| sum K† K - 1 ||_max."""
    total = sum(k.conj().T @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def pure_loss_via_kraus(lam: float, X: FockOperator) -> FockOperator:
    """E_lambda through its Kraus operators, mode by mode."""
    kraus = pure_loss_kraus(float(lam), X.cutoff)
    super_op = sum(np.einsum("ah,bk->abhk", k, k.conj()) for k in kraus)
    return _per_mode(super_op, X)


def damping(mu: float, X: FockOperator) -> FockOperator:
    if not 0.0 < mu <= 1.0:
        raise ValidationError(f"mu must lie in (0, 1], got {mu}", field="mu")
    weights = mu ** total_occupation(X.modes, X.cutoff).astype(float)
    return FockOperator(X.modes, X.cutoff, weights[:, None] * X.matrix * weights[None, :])


def composite(delta: float, X: FockOperator) -> FockOperator:
    """(E_{lambda(delta)} ∘ D_{mu(delta)})^{⊗m}(X)."""
    params = LossParams(delta)
    return pure_loss(params.lam, damping(params.mu, X))
