"""
Gamma_{n,r}, its Kraus operators M_{r,w}, the diagonal D_r and the channel Theta_{n,r}.

    Gamma_{n,r}(X) = Pi_n (|0><0|^{⊗r} ⊗ Tr_r X) Pi_n = sum_w M_{r,w} X M_{r,w}†
    M_{r,w}|n,t> = sqrt(C(n-r, nt-rw)^2 C(r, rw) / (C(n, nt-rw+re_0) C(n, nt))) |n, t - (r/n)(w - e_0)>
    D_r = sum_w M† M = diag(d_r(t))
    Theta_{n,r}(Y) = sum_w N_w Y N_w†,  N_w = M_{r,w} D_r^{-1/2}

Every M_{r,w} sends each type to a single type, so all of them are stored
as sparse contractions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from stein_lab.errors import PreconditionError, ValidationError
from stein_lab.quantum.symmetric import (
    Contraction,
    SymTypeOperator,
    partial_trace_contractions,
)
from stein_lab.typeclasses import TypeVector, count_matrix, enumerate_types, type_index

logger = logging.getLogger(__name__)

D_R_FLOOR = 1e-300


def _check_r(n: int, r: int) -> None:
    if n < 1 or not 0 <= r <= n:
        raise ValidationError(f"need 0 <= r <= n with n >= 1, got r={r}, n={n}", field="r")


@lru_cache(maxsize=512)
def kraus_contractions(n: int, r: int, d: int) -> tuple[Contraction, ...]:
    """M_{r,w} for w in enumerate_types(r, d): Tr_r contraction, then r zeros refilled and projected."""
    _check_r(n, r)
    index = type_index(n, d)
    refill = np.zeros(d, dtype=np.int64)
    refill[0] = r
    counts_short = count_matrix(n - r, d)
    # |n-r, u> -> Pi_n(|0^r> ⊗ |n-r, u>) = sqrt(C(n-r, u) / C(n, u + r e_0)) |n, u + r e_0>
    lift_dst = np.array([index[TypeVector(n, tuple(row + refill))] for row in counts_short], dtype=np.int64)
    lift_coef = np.array(
        [math.exp(0.5 * (_log_comb_counts(row) - _log_comb_counts(row + refill))) for row in counts_short]
    )
    out = []
    for c in partial_trace_contractions(n, r, d):
        out.append(Contraction(c.src, lift_dst[c.dst], c.coef * lift_coef[c.dst]))
    return tuple(out)


def _log_comb_counts(counts: np.ndarray) -> float:
    total = int(np.sum(counts))
    return math.lgamma(total + 1) - sum(math.lgamma(int(c) + 1) for c in counts)


def _apply(contractions: tuple[Contraction, ...], X: SymTypeOperator) -> SymTypeOperator:
    out = np.zeros_like(X.matrix)
    for c in contractions:
        c.apply(X.matrix, out)
    return SymTypeOperator(X.n, X.d, out)


def gamma(n: int, r: int, X: SymTypeOperator) -> SymTypeOperator:
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    _check_r(n, r)
    if r == 0:
        return X
    return _apply(kraus_contractions(n, r, X.d), X)


@dataclass(frozen=True)
class KrausFamily:
    n: int
    r: int
    d: int
    labels: tuple[TypeVector, ...]
    contractions: tuple[Contraction, ...]

    @property
    def operators(self) -> dict[TypeVector, np.ndarray]:
        size = len(enumerate_types(self.n, self.d))
        return {w: c.dense(size, size) for w, c in zip(self.labels, self.contractions)}

    def apply(self, X: SymTypeOperator) -> SymTypeOperator:
        return _apply(self.contractions, X)

    def completeness(self) -> np.ndarray:
        """sum_w M† M as a dense matrix."""
        size = len(enumerate_types(self.n, self.d))
        out = np.zeros((size, size))
        for m in self.operators.values():
            out += m.T @ m
        return out

    def diagonal_residual(self) -> float:
        """max |off-diagonal| of sum_w M† M plus max |diag - d_r|."""
        total = self.completeness()
        off = total - np.diag(np.diag(total))
        return float(max(np.max(np.abs(off), initial=0.0), np.max(np.abs(np.diag(total) - d_r_diag(self.n, self.r, self.d)))))


def kraus_family(n: int, r: int, d: int) -> KrausFamily:
    return KrausFamily(n, r, d, enumerate_types(r, d), kraus_contractions(n, r, d))


@lru_cache(maxsize=512)
def d_r_diag(n: int, r: int, d: int) -> np.ndarray:
    """d_r(t) over enumerate_types(n, d); strictly positive, equal to 1 at e_0."""
    _check_r(n, r)
    size = len(enumerate_types(n, d))
    out = np.zeros(size)
    for c in kraus_contractions(n, r, d):
        np.add.at(out, c.src, c.coef ** 2)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=512)
def theta_contractions(n: int, r: int, d: int) -> tuple[Contraction, ...]:
    diag = d_r_diag(n, r, d)
    if np.min(diag) <= D_R_FLOOR:
        raise PreconditionError(f"D_r is numerically singular for n={n}, r={r}, d={d}")
    inv_root = 1.0 / np.sqrt(diag)
    return tuple(Contraction(c.src, c.dst, c.coef * inv_root[c.src]) for c in kraus_contractions(n, r, d))


def theta(n: int, r: int, X: SymTypeOperator) -> SymTypeOperator:
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    _check_r(n, r)
    if r == 0:
        return X
    return _apply(theta_contractions(n, r, X.d), X)


def sandwich_d_r(n: int, r: int, X: SymTypeOperator) -> SymTypeOperator:
    """D_r^{1/2} X D_r^{1/2}."""
    root = np.sqrt(d_r_diag(n, r, X.d))
    return SymTypeOperator(n, X.d, root[:, None] * X.matrix * root[None, :])


def theta_completeness_residual(n: int, r: int, d: int) -> float:
    """|| sum_w N† N - 1 ||_max."""
    size = len(enumerate_types(n, d))
    total = np.zeros((size, size))
    for c in theta_contractions(n, r, d):
        m = c.dense(size, size)
        total += m.T @ m
    return float(np.max(np.abs(total - np.eye(size))))


def d_r_bound(N: int, eta: float) -> float:
    """3 exp(-N eta^2 / 2)."""
    return 3.0 * math.exp(-N * eta * eta / 2.0)
