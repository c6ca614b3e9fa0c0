"""
Dense operator carriers and validation.

Numerical routines accept plain numpy arrays; DenseOperator and StateVector
are the validated, serializable boundary types. Both are immutable: the
wrapped array is copied and marked read-only on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np
from scipy import linalg as sla

from stein_lab.config import get_tolerances
from stein_lab.errors import ValidationError


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def matrix_to_json(matrix: np.ndarray) -> list[list[list[float]]]:
    """Row-major nested [re, im] pairs."""
    m = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    rows = [[complex(re, im) for re, im in row] for row in data]
    matrix = np.array(rows, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError("matrix must be square", field="entries")
    return matrix


# ---------------------------------------------------------------------
# CHECKS ON RAW ARRAYS
# ---------------------------------------------------------------------

def hermiticity_residual(matrix: np.ndarray) -> float:
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    # relative above unit scale, absolute below it
    scale = max(1.0, float(np.max(np.abs(m))))
    return float(np.max(np.abs(m - m.conj().T))) / scale


def require_square(matrix: np.ndarray, name: str = "operator") -> np.ndarray:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {m.shape}", field=name)
    return m


def require_hermitian(matrix: np.ndarray, name: str = "operator") -> np.ndarray:
    m = require_square(matrix, name)
    residual = hermiticity_residual(m)
    if residual > get_tolerances().hermitian:
        raise ValidationError(f"{name} is not Hermitian", field=name, residual=residual)
    return (m + m.conj().T) / 2


def require_psd(matrix: np.ndarray, name: str = "operator") -> np.ndarray:
    m = require_hermitian(matrix, name)
    lowest = float(np.linalg.eigvalsh(m)[0]) if m.size else 0.0
    if lowest < -get_tolerances().spectral:
        raise ValidationError(f"{name} has negative eigenvalue {lowest:.3e}", field=name, residual=-lowest)
    return m


def require_state(matrix: np.ndarray, name: str = "state") -> np.ndarray:
    m = require_psd(matrix, name)
    trace = float(np.trace(m).real)
    if abs(trace - 1.0) > get_tolerances().normalization:
        raise ValidationError(f"{name} has trace {trace!r}, expected 1", field=name, residual=abs(trace - 1.0))
    return m


# ---------------------------------------------------------------------
# DOMAIN TYPES
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, matrix: np.ndarray) -> "HermitianSpectrum":
        values, vectors = sla.eigh(require_hermitian(matrix))
        order = np.argsort(values)[::-1]
        return cls(eigenvalues=values[order], eigenvectors=vectors[:, order])

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def reconstruction_error(self, matrix: np.ndarray) -> float:
        m = np.asarray(matrix)
        scale = 1.0 + float(np.max(np.abs(m)))
        return float(np.max(np.abs(m - self.reconstruct()))) / scale


@dataclass(frozen=True)
class DenseOperator:
    """
    Finite-dimensional complex operator.

    The hermitian/psd flags are advisory; validate() re-checks them.
    """

    entries: np.ndarray
    hermitian: bool = False
    psd: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(require_square(self.entries, "entries")))
        if self.psd and not self.hermitian:
            object.__setattr__(self, "hermitian", True)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def state(cls, matrix: np.ndarray) -> "DenseOperator":
        return cls(require_state(matrix), hermitian=True, psd=True)

    def validate(self) -> "DenseOperator":
        if self.psd:
            require_psd(self.entries, "entries")
        elif self.hermitian:
            require_hermitian(self.entries, "entries")
        return self

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def to_dict(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "hermitian": self.hermitian,
            "psd": self.psd,
            "entries": matrix_to_json(self.entries),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DenseOperator":
        entries = matrix_from_json(data["entries"])
        if "dim" in data and int(data["dim"]) != entries.shape[0]:
            raise ValidationError("dim does not match entries", field="dim")
        return cls(entries, hermitian=bool(data.get("hermitian", False)), psd=bool(data.get("psd", False))).validate()


@dataclass(frozen=True)
class StateVector:
    """Ket of unit norm, unless explicitly flagged unnormalised."""

    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex, copy=True).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized:
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > get_tolerances().normalization:
                raise ValidationError(f"state vector has norm {norm!r}", field="amplitudes", residual=abs(norm - 1.0))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_dict(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "normalized": self.normalized,
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }


OperatorLike = Union[np.ndarray, DenseOperator]


def as_matrix(x: OperatorLike) -> np.ndarray:
    """Unwrap a DenseOperator, or view an array-like as a complex matrix."""
    if isinstance(x, DenseOperator):
        return x.entries
    return np.asarray(x, dtype=complex)
