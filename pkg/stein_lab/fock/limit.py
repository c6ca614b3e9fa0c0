"""
Entrywise second-quantised limit of the lifted blurring map:

    lim_n <h'| B_n(|h><k|) |k'> = prod_{x} sqrt(C(h_x, l_x) C(k_x, l_x)) delta^{l_x} / (1+delta)^{h_x + k_x - l_x}

when h - h' = k - k' = l ⪰ 0, and 0 otherwise. Only finitely many entries are nonzero.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from stein_lab.errors import ValidationError
from stein_lab.fock.channels import composite
from stein_lab.fock.operators import FockOperator


def limit_entry(h: Sequence[int], k: Sequence[int], h2: Sequence[int], k2: Sequence[int], delta: float) -> float:
    if not len(h) == len(k) == len(h2) == len(k2):
        raise ValidationError("occupation vectors have different mode counts", field="h")
    if delta <= 0.0:
        raise ValidationError(f"delta must be positive, got {delta}", field="delta")
    value = 1.0
    for hx, kx, hx2, kx2 in zip(h, k, h2, k2):
        ell = hx - hx2
        if ell < 0 or kx - kx2 != ell:
            return 0.0
        value *= math.sqrt(math.comb(hx, ell) * math.comb(kx, ell)) * delta ** ell / (1.0 + delta) ** (hx + kx - ell)
    return value


def limit_operator(h: Sequence[int], k: Sequence[int], delta: float, cutoff: Optional[int] = None) -> FockOperator:
    """The limit of B_n(|h><k|) from the closed form; the cutoff defaults to the largest occupation."""
    if len(h) != len(k):
        raise ValidationError("ket and bra have different mode counts", field="k")
    cutoff = max(max(h), max(k)) if cutoff is None else cutoff
    entries = {}
    for ell in np.ndindex(*(min(a, b) + 1 for a, b in zip(h, k))):
        h2 = tuple(a - l for a, l in zip(h, ell))
        k2 = tuple(b - l for b, l in zip(k, ell))
        entries[(h2, k2)] = limit_entry(h, k, h2, k2, delta)
    return FockOperator.from_entries(len(h), cutoff, entries)


def composed_limit(h: Sequence[int], k: Sequence[int], delta: float, cutoff: Optional[int] = None) -> FockOperator:
    """Same operator through (E_{lambda(delta)} ∘ D_{mu(delta)})^{⊗m}."""
    cutoff = max(max(h), max(k)) if cutoff is None else cutoff
    return composite(delta, FockOperator.ketbra(h, k, cutoff))


def limit_two_path_residual(h: Sequence[int], k: Sequence[int], delta: float, cutoff: Optional[int] = None) -> float:
    diff = limit_operator(h, k, delta, cutoff).matrix - composed_limit(h, k, delta, cutoff).matrix
    return float(np.max(np.abs(diff), initial=0.0))
