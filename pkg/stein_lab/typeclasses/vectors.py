"""
n-types over a finite alphabet.

A TypeVector stores integer counts; the probability view counts/n is
computed on demand so every order and ball test can be exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Iterable, Sequence, Union

import numpy as np

from stein_lab.config import get_tolerances
from stein_lab.errors import SizeGuardError, ValidationError

BALL_SLACK = 1e-12


@dataclass(frozen=True, order=True)
class TypeVector:
    n: int
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if self.n < 0:
            raise ValidationError("type length must be nonnegative", field="n")
        if not counts:
            raise ValidationError("alphabet must be nonempty", field="counts")
        if any(c < 0 for c in counts):
            raise ValidationError(f"negative count in {counts}", field="counts")
        if sum(counts) != self.n:
            raise ValidationError(f"counts {counts} do not sum to n={self.n}", field="counts")

    @classmethod
    def of(cls, counts: Sequence[int]) -> "TypeVector":
        return cls(n=int(sum(counts)), counts=tuple(counts))

    @classmethod
    def concentrated(cls, n: int, alphabet_size: int, symbol: int = 0) -> "TypeVector":
        """All mass on one symbol; symbol 0 gives e_0."""
        counts = [0] * alphabet_size
        counts[symbol] = n
        return cls(n=n, counts=tuple(counts))

    @property
    def alphabet_size(self) -> int:
        return len(self.counts)

    def probabilities(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(self.alphabet_size)
        return np.asarray(self.counts, dtype=float) / self.n

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    def __add__(self, other: "TypeVector") -> "TypeVector":
        _same_alphabet(self, other)
        return TypeVector.of([a + b for a, b in zip(self.counts, other.counts)])

    def __sub__(self, other: "TypeVector") -> "TypeVector":
        _same_alphabet(self, other)
        return TypeVector.of([a - b for a, b in zip(self.counts, other.counts)])

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "counts": list(self.counts)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TypeVector":
        return cls(n=int(data["n"]), counts=tuple(int(c) for c in data["counts"]))


def _same_alphabet(a: TypeVector, b: TypeVector) -> None:
    if a.alphabet_size != b.alphabet_size:
        raise ValidationError(
            f"alphabet sizes differ: {a.alphabet_size} vs {b.alphabet_size}", field="counts"
        )


# ---------------------------------------------------------------------
# ENUMERATION AND COUNTING
# ---------------------------------------------------------------------

def type_count(n: int, alphabet_size: int) -> int:
    return math.comb(n + alphabet_size - 1, alphabet_size - 1)


def _compositions(n: int, k: int) -> Iterable[tuple[int, ...]]:
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def enumerate_types(n: int, alphabet_size: int) -> tuple[TypeVector, ...]:
    """All n-types, ordered by descending counts lexicographically: (2,0),(1,1),(0,2)."""
    if n < 0 or alphabet_size < 1:
        raise ValidationError(f"invalid (n, alphabet_size) = ({n}, {alphabet_size})", field="n")
    requested = type_count(n, alphabet_size)
    limit = get_tolerances().enumeration_guard
    if requested > limit:
        raise SizeGuardError(f"|T_{n}| over {alphabet_size} symbols", requested=requested, limit=limit)
    return tuple(TypeVector(n=n, counts=c) for c in _compositions(n, alphabet_size))


@lru_cache(maxsize=256)
def type_index(n: int, alphabet_size: int) -> dict[TypeVector, int]:
    return {t: i for i, t in enumerate(enumerate_types(n, alphabet_size))}


def count_matrix(n: int, alphabet_size: int) -> np.ndarray:
    """Integer array of shape (|T_n|, alphabet_size), rows in enumerate_types order."""
    return np.array([t.counts for t in enumerate_types(n, alphabet_size)], dtype=np.int64)


def multinomial(t: TypeVector) -> int:
    """n! / prod_x counts[x]!"""
    out = math.factorial(t.n)
    for c in t.counts:
        out //= math.factorial(c)
    return out


def multinomial_by_binomials(t: TypeVector) -> int:
    """Same value as multinomial(), as a product of binomials over the remaining length."""
    out, remaining = 1, t.n
    for c in t.counts:
        out *= math.comb(remaining, c)
        remaining -= c
    return out


def type_of_sequence(sequence: Sequence[int], alphabet_size: int) -> TypeVector:
    counts = [0] * alphabet_size
    for position, symbol in enumerate(sequence):
        if not 0 <= int(symbol) < alphabet_size:
            raise ValidationError(
                f"symbol {symbol} at position {position} outside alphabet of size {alphabet_size}",
                field="sequence",
            )
        counts[int(symbol)] += 1
    return TypeVector(n=len(sequence), counts=tuple(counts))


# ---------------------------------------------------------------------
# ORDER AND BALLS
# ---------------------------------------------------------------------

Distribution = Union[TypeVector, Sequence[float], np.ndarray]


def _as_probabilities(x: Distribution) -> np.ndarray:
    if isinstance(x, TypeVector):
        return x.probabilities()
    return np.asarray(x, dtype=float)


def infinity_distance(s: Distribution, t: Distribution) -> float:
    a, b = _as_probabilities(s), _as_probabilities(t)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}", field="t")
    return float(np.max(np.abs(a - b)))


def leq_elementwise(a: Union[TypeVector, Sequence[float]], b: Union[TypeVector, Sequence[float]]) -> bool:
    """a ⪯ b entrywise; TypeVectors compare their integer counts."""
    left = a.counts if isinstance(a, TypeVector) else tuple(a)
    right = b.counts if isinstance(b, TypeVector) else tuple(b)
    if len(left) != len(right):
        raise ValidationError("alphabet sizes differ", field="b")
    return all(x <= y for x, y in zip(left, right))


def _is_exact(values: Iterable[Any]) -> bool:
    return all(isinstance(v, Rational) for v in values)


def in_type_ball(t: TypeVector, s: Distribution, delta: Union[float, Fraction]) -> bool:
    """||s - t||_inf <= delta, compared as n*delta vs |counts[x] - n*s(x)|."""
    if isinstance(s, TypeVector):
        centre: Sequence[Any] = s.fractions()
    else:
        centre = list(s)
    if len(centre) != t.alphabet_size:
        raise ValidationError("alphabet sizes differ", field="s")
    if _is_exact(centre) and isinstance(delta, Rational):
        radius = t.n * Fraction(delta)
        return all(abs(c - t.n * Fraction(p)) <= radius for c, p in zip(t.counts, centre))
    radius_f = t.n * float(delta) + BALL_SLACK * max(1, t.n)
    return all(abs(c - t.n * float(p)) <= radius_f for c, p in zip(t.counts, centre))


def type_ball(n: int, s: Distribution, delta: Union[float, Fraction]) -> tuple[TypeVector, ...]:
    alphabet_size = s.alphabet_size if isinstance(s, TypeVector) else len(s)
    return tuple(t for t in enumerate_types(n, alphabet_size) if in_type_ball(t, s, delta))


def ball_mask(n: int, s: Distribution, delta: Union[float, Fraction]) -> np.ndarray:
    """Boolean mask over enumerate_types(n, |X|) for the closed delta-ball around s."""
    alphabet_size = s.alphabet_size if isinstance(s, TypeVector) else len(s)
    return np.array([in_type_ball(t, s, delta) for t in enumerate_types(n, alphabet_size)], dtype=bool)
