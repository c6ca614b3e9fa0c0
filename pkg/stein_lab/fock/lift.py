"""
The isometry U_n: Sym^n(C^d) -> Fock space on d-1 modes, |n, t> -> |n t(1), ..., n t(d-1)>,
and the blurring map seen through it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np

from stein_lab.errors import ValidationError
from stein_lab.fock.operators import FockOperator, occupation_index
from stein_lab.quantum.blurring import blur_q
from stein_lab.quantum.symmetric import SymTypeOperator
from stein_lab.typeclasses import count_matrix


@lru_cache(maxsize=128)
def _placement(n: int, d: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """(type positions, Fock positions) of the types whose occupations fit under the cutoff."""
    if d < 2:
        raise ValidationError("lifting needs at least two symbols", field="d")
    counts = count_matrix(n, d)[:, 1:]
    index = occupation_index(d - 1, cutoff)
    fits = np.flatnonzero(np.all(counts <= cutoff, axis=1))
    fock = np.array([index[tuple(int(c) for c in counts[i])] for i in fits], dtype=np.int64)
    return fits, fock


def lift(n: int, X: SymTypeOperator, cutoff: Optional[int] = None) -> FockOperator:
    """U_n X U_n†, compressed onto the cutoff (default n, which keeps every type)."""
    if X.n != n:
        raise ValidationError(f"operator lives on Sym^{X.n}, not Sym^{n}", field="X")
    cutoff = n if cutoff is None else cutoff
    fits, fock = _placement(n, X.d, cutoff)
    out = FockOperator.zeros(X.d - 1, cutoff).matrix.copy()
    out[np.ix_(fock, fock)] = X.matrix[np.ix_(fits, fits)]
    return FockOperator(X.d - 1, cutoff, out)


def unlift(n: int, Y: FockOperator) -> SymTypeOperator:
    """U_n† Y U_n; occupation vectors with more than n excitations are annihilated."""
    d = Y.modes + 1
    fits, fock = _placement(n, d, Y.cutoff)
    out = SymTypeOperator.zeros(n, d).matrix.copy()
    out[np.ix_(fits, fits)] = Y.matrix[np.ix_(fock, fock)]
    return SymTypeOperator(n, d, out)


def lifted_blur(n: int, delta: float, Y: FockOperator) -> FockOperator:
    """U_n blur_q(U_n† Y U_n) U_n†; no occupation grows, so Y's cutoff is kept."""
    return lift(n, blur_q(n, delta, unlift(n, Y)), cutoff=Y.cutoff)
