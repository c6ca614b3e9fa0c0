"""
Permutation-invariant distributions on X^n, stored by type-class mass.

weights[i] is the mass of the whole class T_{n,t_i} (types in
enumerate_types order); each sequence of the class carries
weights[i] / |T_{n,t_i}|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Union

import numpy as np
from scipy.special import gammaln

from stein_lab.divergences.result import DISTRIBUTION_SUM_TOL, ClassicalDistribution
from stein_lab.errors import ValidationError
from stein_lab.typeclasses import TypeVector, ball_mask, count_matrix, enumerate_types, multinomial, type_index
from stein_lab.typeclasses.vectors import Distribution


def log_multinomial_counts(counts: np.ndarray) -> np.ndarray:
    """log(n! / prod counts!) row-wise."""
    c = np.asarray(counts, dtype=float)
    return gammaln(c.sum(axis=-1) + 1) - np.sum(gammaln(c + 1), axis=-1)


def iid_type_masses(p: np.ndarray, n: int) -> np.ndarray:
    """Type-class masses of p^{⊗n}: multinomial(t) prod_x p(x)^{n t(x)}."""
    pv = np.asarray(p, dtype=float)
    counts = count_matrix(n, pv.size)
    with np.errstate(divide="ignore"):
        log_p = np.log(pv)
    # 0 * log 0 = 0
    terms = np.where(counts > 0, counts * log_p, 0.0)
    return np.exp(log_multinomial_counts(counts) + terms.sum(axis=1))


@dataclass(frozen=True)
class SymmetricDistribution:
    n: int
    alphabet_size: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        expected = len(enumerate_types(self.n, self.alphabet_size))
        if w.size != expected:
            raise ValidationError(f"expected {expected} type weights, got {w.size}", field="weights")
        if np.any(w < 0):
            raise ValidationError("negative type weight", field="weights", residual=float(-w.min()))
        if abs(float(w.sum()) - 1.0) > DISTRIBUTION_SUM_TOL * max(1, w.size):
            raise ValidationError(f"type weights sum to {w.sum()!r}", field="weights", residual=abs(float(w.sum()) - 1.0))
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def iid(cls, p: Union[ClassicalDistribution, Sequence[float], np.ndarray], n: int) -> "SymmetricDistribution":
        pv = p.weights if isinstance(p, ClassicalDistribution) else ClassicalDistribution(np.asarray(p, dtype=float)).weights
        masses = iid_type_masses(pv, n)
        return cls(n, pv.size, masses / masses.sum())

    @classmethod
    def delta(cls, t: TypeVector) -> "SymmetricDistribution":
        w = np.zeros(len(enumerate_types(t.n, t.alphabet_size)))
        w[type_index(t.n, t.alphabet_size)[t]] = 1.0
        return cls(t.n, t.alphabet_size, w)

    @classmethod
    def from_mapping(cls, n: int, alphabet_size: int, masses: Mapping[TypeVector, float]) -> "SymmetricDistribution":
        index = type_index(n, alphabet_size)
        w = np.zeros(len(index))
        for t, mass in masses.items():
            if t not in index:
                raise ValidationError(f"{t.counts} is not an {n}-type over {alphabet_size} symbols", field="masses")
            w[index[t]] += float(mass)
        return cls(n, alphabet_size, w)

    @classmethod
    def from_sequence_probabilities(cls, n: int, alphabet_size: int, probabilities: Mapping[tuple[int, ...], float]) -> "SymmetricDistribution":
        """Sum sequence probabilities into type classes (no invariance check)."""
        index = type_index(n, alphabet_size)
        w = np.zeros(len(index))
        for seq, prob in probabilities.items():
            counts = np.bincount(np.asarray(seq, dtype=int), minlength=alphabet_size)
            w[index[TypeVector(n, tuple(int(c) for c in counts))]] += float(prob)
        return cls(n, alphabet_size, w)

    @property
    def types(self) -> tuple[TypeVector, ...]:
        return enumerate_types(self.n, self.alphabet_size)

    def mass(self, t: TypeVector) -> float:
        return float(self.weights[type_index(self.n, self.alphabet_size)[t]])

    def sequence_probability(self, sequence: Sequence[int]) -> float:
        counts = np.bincount(np.asarray(sequence, dtype=int), minlength=self.alphabet_size)
        t = TypeVector(self.n, tuple(int(c) for c in counts))
        return self.mass(t) / multinomial(t)

    def ball_mass(self, centre: Distribution, delta: float) -> float:
        return float(self.weights[ball_mask(self.n, centre, delta)].sum())

    def as_distribution(self) -> ClassicalDistribution:
        """Type-space view as a distribution over types."""
        return ClassicalDistribution(self.weights / self.weights.sum())

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "alphabet_size": self.alphabet_size,
            "types": [list(t.counts) for t in self.types],
            "weights": [float(x) for x in self.weights],
        }


def random_symmetric(n: int, alphabet_size: int, rng: np.random.Generator, *, support_fraction: float = 1.0) -> SymmetricDistribution:
    """Dirichlet type weights, optionally supported on a random subset of types."""
    size = len(enumerate_types(n, alphabet_size))
    w = rng.dirichlet(np.ones(size))
    if support_fraction < 1.0:
        keep = rng.random(size) < support_fraction
        keep[rng.integers(size)] = True
        w = np.where(keep, w, 0.0)
    return SymmetricDistribution(n, alphabet_size, w / w.sum())


def total_variation(a: SymmetricDistribution, b: SymmetricDistribution) -> float:
    """Equal on sequences and on types for symmetric distributions."""
    if (a.n, a.alphabet_size) != (b.n, b.alphabet_size):
        raise ValidationError("distributions live on different type spaces", field="b")
    return 0.5 * float(np.abs(a.weights - b.weights).sum())
