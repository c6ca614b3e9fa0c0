"""Concentration of i.i.d. sources on type balls."""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from stein_lab.classical.symmetric import SymmetricDistribution
from stein_lab.divergences.result import ClassicalDistribution
from stein_lab.errors import ValidationError


def _probabilities(p: Union[ClassicalDistribution, Sequence[float], np.ndarray]) -> np.ndarray:
    return p.weights if isinstance(p, ClassicalDistribution) else ClassicalDistribution(np.asarray(p, dtype=float)).weights


def typicality_mass(p: Union[ClassicalDistribution, Sequence[float], np.ndarray], n: int, delta: float) -> float:
    """p^{⊗n} mass of the closed delta-ball of n-types around p."""
    if delta < 0:
        raise ValidationError("delta must be nonnegative", field="delta")
    pv = _probabilities(p)
    if delta >= 1.0:
        return 1.0
    return SymmetricDistribution.iid(pv, n).ball_mass(pv, delta)


def sanov_pinsker_bound(n: int, alphabet_size: int, delta: float) -> float:
    """(n+1)^{|X|} 2^{-2 n delta^2}, an upper bound on 1 - typicality_mass."""
    return (n + 1) ** alphabet_size * 2.0 ** (-2.0 * n * delta * delta)


def typical_radius(n: int, alphabet_size: int, eta: float) -> float:
    """delta_n = sqrt(|X|/(2n) log2((n+1)/eta)); makes sanov_pinsker_bound <= eta."""
    if not 0.0 < eta < 1.0:
        raise ValidationError(f"eta must lie in (0, 1), got {eta}", field="eta")
    return math.sqrt(alphabet_size / (2.0 * n) * math.log2((n + 1) / eta))
