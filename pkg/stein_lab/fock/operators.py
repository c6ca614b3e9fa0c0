"""
Operators on truncated multi-mode Fock space.

Basis vectors |h_1, ..., h_m> with 0 <= h_i <= cutoff, ordered as
itertools.product(range(cutoff + 1), repeat=m), so that the matrix
reshapes into a tensor with axes (h_1..h_m, k_1..k_m).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from stein_lab.errors import ValidationError
from stein_lab.linalg import StateVector, matrix_from_json, matrix_to_json, trace_norm
from stein_lab.linalg.sampling import random_density_matrix

Occupation = tuple[int, ...]


@lru_cache(maxsize=64)
def occupations(modes: int, cutoff: int) -> tuple[Occupation, ...]:
    if modes < 1 or cutoff < 0:
        raise ValidationError(f"need modes >= 1 and cutoff >= 0, got ({modes}, {cutoff})", field="modes")
    return tuple(itertools.product(range(cutoff + 1), repeat=modes))


@lru_cache(maxsize=64)
def occupation_index(modes: int, cutoff: int) -> dict[Occupation, int]:
    return {h: i for i, h in enumerate(occupations(modes, cutoff))}


@lru_cache(maxsize=64)
def total_occupation(modes: int, cutoff: int) -> np.ndarray:
    """|h| = sum_i h_i for every basis vector."""
    return np.array([sum(h) for h in occupations(modes, cutoff)], dtype=np.int64)


def _check_occupation(h: Sequence[int], modes: int, cutoff: int) -> Occupation:
    occ = tuple(int(x) for x in h)
    if len(occ) != modes or any(x < 0 or x > cutoff for x in occ):
        raise ValidationError(f"occupation {occ} outside {{0..{cutoff}}}^{modes}", field="h")
    return occ


@dataclass(frozen=True)
class FockOperator:
    modes: int
    cutoff: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        size = (self.cutoff + 1) ** self.modes
        mat = np.array(self.matrix, dtype=complex, copy=True)
        if mat.shape != (size, size):
            raise ValidationError(f"Fock operator of shape {mat.shape}, expected {(size, size)}", field="matrix")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def zeros(cls, modes: int, cutoff: int) -> "FockOperator":
        size = (cutoff + 1) ** modes
        return cls(modes, cutoff, np.zeros((size, size)))

    @classmethod
    def ketbra(cls, h: Sequence[int], k: Sequence[int], cutoff: int) -> "FockOperator":
        if len(h) != len(k):
            raise ValidationError("ket and bra have different mode counts", field="k")
        modes = len(h)
        index = occupation_index(modes, cutoff)
        out = np.zeros((len(index), len(index)), dtype=complex)
        out[index[_check_occupation(h, modes, cutoff)], index[_check_occupation(k, modes, cutoff)]] = 1.0
        return cls(modes, cutoff, out)

    @classmethod
    def vacuum(cls, modes: int, cutoff: int) -> "FockOperator":
        zero = (0,) * modes
        return cls.ketbra(zero, zero, cutoff)

    @classmethod
    def pure(cls, psi: StateVector, modes: int, cutoff: int) -> "FockOperator":
        return cls(modes, cutoff, psi.projector())

    @classmethod
    def from_entries(cls, modes: int, cutoff: int, entries: Mapping[tuple[Occupation, Occupation], complex]) -> "FockOperator":
        index = occupation_index(modes, cutoff)
        out = np.zeros((len(index), len(index)), dtype=complex)
        for (h, k), value in entries.items():
            out[index[_check_occupation(h, modes, cutoff)], index[_check_occupation(k, modes, cutoff)]] += value
        return cls(modes, cutoff, out)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def entry(self, h: Sequence[int], k: Sequence[int]) -> complex:
        index = occupation_index(self.modes, self.cutoff)
        return complex(self.matrix[index[tuple(h)], index[tuple(k)]])

    def as_tensor(self) -> np.ndarray:
        return self.matrix.reshape((self.cutoff + 1,) * (2 * self.modes))

    @classmethod
    def from_tensor(cls, tensor: np.ndarray, modes: int, cutoff: int) -> "FockOperator":
        size = (cutoff + 1) ** modes
        return cls(modes, cutoff, np.asarray(tensor).reshape(size, size))

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def trace_norm(self) -> float:
        return trace_norm(self.matrix)

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def with_cutoff(self, cutoff: int) -> "FockOperator":
        """Embed into a larger cutoff, or compress onto a smaller one (entries beyond it are dropped)."""
        if cutoff == self.cutoff:
            return self
        keep = min(cutoff, self.cutoff) + 1
        src = self.as_tensor()[(slice(0, keep),) * (2 * self.modes)]
        out = np.zeros((cutoff + 1,) * (2 * self.modes), dtype=complex)
        out[(slice(0, keep),) * (2 * self.modes)] = src
        return FockOperator.from_tensor(out, self.modes, cutoff)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._same_space(other)
        return FockOperator(self.modes, self.cutoff, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._same_space(other)
        return FockOperator(self.modes, self.cutoff, self.matrix - other.matrix)

    def scaled(self, factor: complex) -> "FockOperator":
        return FockOperator(self.modes, self.cutoff, factor * self.matrix)

    def _same_space(self, other: "FockOperator") -> None:
        if (self.modes, self.cutoff) != (other.modes, other.cutoff):
            raise ValidationError(
                f"operators on {self.modes} modes / cutoff {self.cutoff} and {other.modes} modes / cutoff {other.cutoff}",
                field="other",
            )

    def to_dict(self) -> dict[str, Any]:
        return {"modes": self.modes, "cutoff": self.cutoff, "matrix": matrix_to_json(self.matrix)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FockOperator":
        try:
            modes, cutoff = int(data["modes"]), int(data["cutoff"])
            matrix = matrix_from_json(data["matrix"])
        except KeyError as exc:
            raise ValidationError(f"Fock operator is missing {exc.args[0]!r}", field=str(exc.args[0])) from exc
        return cls(modes, cutoff, matrix)


# ---------------------------------------------------------------------
# STATES
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedState:
    """A pure state cut at a finite occupation; tail is the discarded probability mass."""

    vector: StateVector
    tail: float


def coherent_state(alpha: complex, cutoff: int, *, renormalize: bool = False) -> TruncatedState:
    """<h|alpha> = e^{-|alpha|^2/2} alpha^h / sqrt(h!) for h <= cutoff."""
    h = np.arange(cutoff + 1)
    r = abs(alpha)
    if r == 0.0:
        amps = (h == 0).astype(complex)
    else:
        log_mod = -0.5 * r * r + h * math.log(r) - 0.5 * gammaln(h + 1)
        amps = np.exp(log_mod) * np.exp(1j * np.angle(alpha) * h)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if renormalize:
        amps = amps / np.linalg.norm(amps)
    return TruncatedState(StateVector(amps, normalized=renormalize), tail)


def thermal_like(mean: float, cutoff: int) -> FockOperator:
    """Geometric occupation law with the given mean, renormalised on the cutoff."""
    if mean < 0.0:
        raise ValidationError("mean occupation must be nonnegative", field="mean")
    q = mean / (1.0 + mean)
    weights = q ** np.arange(cutoff + 1)
    return FockOperator(1, cutoff, np.diag(weights / weights.sum()))


def random_fock_state(modes: int, cutoff: int, rng: np.random.Generator, rank: Optional[int] = None) -> FockOperator:
    return FockOperator(modes, cutoff, random_density_matrix((cutoff + 1) ** modes, rng, rank))
