"""
Unit tests for permutation-invariant distributions and typicality.
"""

from __future__ import annotations

import numpy as np
import pytest

from stein_lab.classical import (
    SymmetricDistribution,
    random_symmetric,
    sanov_pinsker_bound,
    total_variation,
    typical_radius,
    typicality_mass,
)
from stein_lab.errors import ValidationError
from stein_lab.typeclasses import TypeVector


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def test_iid_type_masses():
    law = SymmetricDistribution.iid([0.25, 0.75], 2)
    # types ordered (2,0), (1,1), (0,2)
    assert law.weights == pytest.approx([0.0625, 0.375, 0.5625])


def test_sequence_probability_is_product():
    law = SymmetricDistribution.iid([0.2, 0.3, 0.5], 4)
    assert law.sequence_probability([0, 2, 2, 1]) == pytest.approx(0.2 * 0.5 * 0.5 * 0.3)


def test_point_mass_on_a_type():
    t = TypeVector(3, (1, 2))
    law = SymmetricDistribution.delta(t)
    assert law.mass(t) == 1.0
    assert law.sequence_probability([1, 0, 1]) == pytest.approx(1.0 / 3.0)


def test_from_mapping_rejects_foreign_types():
    with pytest.raises(ValidationError):
        SymmetricDistribution.from_mapping(3, 2, {TypeVector(2, (1, 1)): 1.0})


def test_weights_are_validated():
    with pytest.raises(ValidationError):
        SymmetricDistribution(2, 2, np.array([0.5, 0.5]))
    with pytest.raises(ValidationError):
        SymmetricDistribution(2, 2, np.array([0.5, 0.6, -0.1]))


def test_sparse_random_symmetric_keeps_some_support():
    law = random_symmetric(6, 2, np.random.default_rng(4), support_fraction=0.01)
    assert np.count_nonzero(law.weights) >= 1
    assert law.weights.sum() == pytest.approx(1.0)


def test_total_variation():
    a = SymmetricDistribution.iid([0.5, 0.5], 3)
    assert total_variation(a, a) == 0.0
    b = SymmetricDistribution.delta(TypeVector(3, (3, 0)))
    assert total_variation(a, b) == pytest.approx(1.0 - 0.125)


def test_typicality_beats_sanov_pinsker():
    """
    Invariant:
    1 - p^n(ball) <= (n+1)^|X| 2^{-2 n delta^2}.
    """
    p = [0.3, 0.7]
    for n in (10, 40, 120):
        for delta in (0.05, 0.1, 0.2):
            assert 1.0 - typicality_mass(p, n, delta) <= sanov_pinsker_bound(n, 2, delta) + 1e-12


def test_typical_radius_makes_bound_eta():
    n, k, eta = 50, 3, 0.1
    delta = typical_radius(n, k, eta)
    assert sanov_pinsker_bound(n, k, delta) <= eta * (1.0 + 1e-9)


def test_typical_radius_rejects_eta():
    with pytest.raises(ValidationError):
        typical_radius(10, 2, 1.0)
