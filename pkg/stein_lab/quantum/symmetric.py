"""
Operators on Sym^n(C^d) in the type basis.

|n, t> is the normalised uniform superposition of the sequences of type t.
Every map in this package is written in that basis; the full d^n tensor
space is only reconstructed for oracles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping, Optional

import numpy as np

from stein_lab.classical.symmetric import log_multinomial_counts
from stein_lab.config import get_tolerances
from stein_lab.errors import SizeGuardError, ValidationError
from stein_lab.linalg import StateVector, as_matrix, matrix_to_json, trace_norm
from stein_lab.linalg.operators import OperatorLike
from stein_lab.typeclasses import TypeVector, count_matrix, enumerate_types, leq_elementwise, multinomial, type_index

logger = logging.getLogger(__name__)


def _check_dense(n: int, d: int) -> None:
    limit = get_tolerances().dense_guard
    if d ** n > limit:
        raise SizeGuardError(f"dense space ({d})^{n}", requested=d ** n, limit=limit)


@lru_cache(maxsize=64)
def _sequence_counts(n: int, d: int) -> np.ndarray:
    """Symbol counts of every computational basis sequence, shape (d^n, d)."""
    digits = (np.arange(d ** n)[:, None] // d ** np.arange(n - 1, -1, -1)) % d
    return (digits[:, :, None] == np.arange(d)).sum(axis=1)


def sym_basis_vector(n: int, t: TypeVector, d: Optional[int] = None) -> StateVector:
    d = t.alphabet_size if d is None else d
    if t.n != n or t.alphabet_size != d:
        raise ValidationError(f"type {t.counts} is not an {n}-type over {d} symbols", field="t")
    _check_dense(n, d)
    mask = np.all(_sequence_counts(n, d) == np.asarray(t.counts), axis=1)
    amplitudes = mask / math.sqrt(multinomial(t))
    return StateVector(amplitudes.astype(complex))


@lru_cache(maxsize=64)
def sym_basis_matrix(n: int, d: int) -> np.ndarray:
    """Isometry V: type basis -> (C^d)^{⊗n}, columns |n, t> in enumerate_types order."""
    _check_dense(n, d)
    seq = _sequence_counts(n, d)
    counts = count_matrix(n, d)
    hits = np.all(seq[:, None, :] == counts[None, :, :], axis=-1).astype(float)
    hits /= np.sqrt(np.exp(log_multinomial_counts(counts)))[None, :]
    hits.setflags(write=False)
    return hits


def sym_overlap(r: int, w: TypeVector, n: int, t: TypeVector) -> tuple[float, Optional[TypeVector]]:
    """
    <x^r| n, t> = sqrt(C(n-r, nt - rw) / C(n, nt)) |n-r, t - w> for any x^r of type w;
    zero (with no residual) unless rw ⪯ nt.
    """
    if w.n != r or t.n != n or r > n:
        raise ValidationError(f"need an r-type and an n-type with r <= n, got r={w.n}, n={t.n}", field="w")
    if not leq_elementwise(w, t):
        return 0.0, None
    residual = t - w
    return math.sqrt(multinomial(residual) / multinomial(t)), residual


# ---------------------------------------------------------------------
# OPERATORS
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class SymTypeOperator:
    """matrix[i, j] = <n, t_i| X |n, t_j>, indices in enumerate_types order."""

    n: int
    d: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        size = len(enumerate_types(self.n, self.d))
        mat = np.array(self.matrix, dtype=complex, copy=True)
        if mat.shape != (size, size):
            raise ValidationError(f"type-basis operator of shape {mat.shape}, expected {(size, size)}", field="matrix")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def zeros(cls, n: int, d: int) -> "SymTypeOperator":
        size = len(enumerate_types(n, d))
        return cls(n, d, np.zeros((size, size)))

    @classmethod
    def ketbra(cls, t: TypeVector, s: TypeVector) -> "SymTypeOperator":
        if (t.n, t.alphabet_size) != (s.n, s.alphabet_size):
            raise ValidationError("ket and bra types differ in length or alphabet", field="s")
        index = type_index(t.n, t.alphabet_size)
        out = np.zeros((len(index), len(index)), dtype=complex)
        out[index[t], index[s]] = 1.0
        return cls(t.n, t.alphabet_size, out)

    @classmethod
    def from_entries(cls, n: int, d: int, entries: Mapping[tuple[TypeVector, TypeVector], complex]) -> "SymTypeOperator":
        index = type_index(n, d)
        out = np.zeros((len(index), len(index)), dtype=complex)
        for (t, s), value in entries.items():
            out[index[t], index[s]] += value
        return cls(n, d, out)

    @classmethod
    def from_dense(cls, matrix: OperatorLike, d: int, n: int) -> "SymTypeOperator":
        """V† X V; the part of X outside Sym^n is dropped."""
        v = sym_basis_matrix(n, d)
        return cls(n, d, v.T @ as_matrix(matrix) @ v)

    @property
    def types(self) -> tuple[TypeVector, ...]:
        return enumerate_types(self.n, self.d)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def entry(self, t: TypeVector, s: TypeVector) -> complex:
        index = type_index(self.n, self.d)
        return complex(self.matrix[index[t], index[s]])

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def trace_norm(self) -> float:
        return trace_norm(self.matrix)

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def to_dense(self) -> np.ndarray:
        v = sym_basis_matrix(self.n, self.d)
        return v @ self.matrix @ v.T

    def __add__(self, other: "SymTypeOperator") -> "SymTypeOperator":
        self._same_space(other)
        return SymTypeOperator(self.n, self.d, self.matrix + other.matrix)

    def __sub__(self, other: "SymTypeOperator") -> "SymTypeOperator":
        self._same_space(other)
        return SymTypeOperator(self.n, self.d, self.matrix - other.matrix)

    def scaled(self, factor: complex) -> "SymTypeOperator":
        return SymTypeOperator(self.n, self.d, factor * self.matrix)

    def _same_space(self, other: "SymTypeOperator") -> None:
        if (self.n, self.d) != (other.n, other.d):
            raise ValidationError(f"operators on Sym^{self.n}(C^{self.d}) and Sym^{other.n}(C^{other.d})", field="other")

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "types": [list(t.counts) for t in self.types],
            "matrix": matrix_to_json(self.matrix),
        }


# ---------------------------------------------------------------------
# CONTRACTIONS
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class Contraction:
    """
    Sparse map |n, t> -> coef * |n', t'> for the types t in src.
    Each source type has exactly one image, so two contractions never mix
    rows of one source.
    """

    src: np.ndarray
    dst: np.ndarray
    coef: np.ndarray

    def apply(self, matrix: np.ndarray, out: np.ndarray) -> None:
        """out += C X C†."""
        if self.src.size == 0:
            return
        block = matrix[np.ix_(self.src, self.src)]
        out[np.ix_(self.dst, self.dst)] += self.coef[:, None] * block * self.coef[None, :]

    def dense(self, rows: int, cols: int) -> np.ndarray:
        out = np.zeros((rows, cols))
        out[self.dst, self.src] = self.coef
        return out


def _log_multinomials(counts: np.ndarray) -> np.ndarray:
    return log_multinomial_counts(counts) if counts.size else np.zeros(0)


@lru_cache(maxsize=512)
def partial_trace_contractions(n: int, r: int, d: int) -> tuple[Contraction, ...]:
    """
    One contraction per w in T_r:
        |n, t> -> sqrt(C(r, rw) C(n-r, nt-rw) / C(n, nt)) |n-r, t-w>
    so that Tr_r X = sum_w C_w X C_w†.
    """
    if not 0 <= r <= n:
        raise ValidationError(f"need 0 <= r <= n, got r={r}, n={n}", field="r")
    counts = count_matrix(n, d)
    log_t = _log_multinomials(counts)
    target = type_index(n - r, d)
    out = []
    for w in enumerate_types(r, d):
        residual = counts - np.asarray(w.counts)
        ok = np.all(residual >= 0, axis=1)
        src = np.flatnonzero(ok)
        res = residual[src]
        dst = np.array([target[TypeVector(n - r, tuple(row))] for row in res], dtype=np.int64)
        log_w = math.log(multinomial(w))
        coef = np.exp(0.5 * (log_w + _log_multinomials(res) - log_t[src]))
        out.append(Contraction(src, dst, coef))
    return tuple(out)


def sym_partial_trace(n: int, r: int, X: SymTypeOperator) -> SymTypeOperator:
    """Trace out r of the n sites (which ones is irrelevant on Sym^n)."""
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    if r == 0:
        return X
    size = len(enumerate_types(n - r, X.d))
    out = np.zeros((size, size), dtype=complex)
    for contraction in partial_trace_contractions(n, r, X.d):
        contraction.apply(X.matrix, out)
    return SymTypeOperator(n - r, X.d, out)
