"""
Unit tests for tensor products, partial traces, permutations and
symmetric purification.
"""

from __future__ import annotations

import numpy as np
import pytest

from stein_lab.errors import SizeGuardError, ValidationError
from stein_lab.config import tolerance_override
from stein_lab.linalg import (
    partial_trace,
    permutation_invariance_residual,
    purification_overlap,
    purify_symmetric,
    symmetric_projector,
    symmetrize,
    tensor,
    tensor_power,
    trace_out_last,
)
from stein_lab.linalg.sampling import random_density_matrix


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def test_partial_trace_of_product_recovers_factor():
    rng = np.random.default_rng(1)
    a, b = random_density_matrix(2, rng), random_density_matrix(3, rng)
    assert np.allclose(partial_trace(tensor(a, b), [2, 3], [0]), a)
    assert np.allclose(partial_trace(tensor(a, b), [2, 3], [1]), b)


def test_trace_out_last_sites():
    rho = random_density_matrix(2, np.random.default_rng(2))
    assert np.allclose(trace_out_last(tensor_power(rho, 3), 2, 3, 2), rho)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(ValidationError):
        partial_trace(np.eye(4), [3, 2], [0])


def test_symmetric_projector_dimension():
    """
    Invariant:
    Tr P_sym = dim Sym^N(C^d) = C(N + d - 1, d - 1).
    """
    assert np.trace(symmetric_projector(2, 3)).real == pytest.approx(4.0)
    assert np.trace(symmetric_projector(3, 2)).real == pytest.approx(6.0)


def test_symmetrize_is_idempotent_and_invariant():
    x = random_density_matrix(8, np.random.default_rng(4))
    once = symmetrize(x, 2, 3)
    assert np.allclose(symmetrize(once, 2, 3), once)
    assert permutation_invariance_residual(once, 2, 3) < 1e-12


def test_symmetrize_size_guard():
    with tolerance_override(symmetrize_guard=10):
        with pytest.raises(SizeGuardError):
            symmetrize(np.eye(8), 2, 3)


def test_symmetric_purification_is_normalized():
    omega = tensor_power(random_density_matrix(2, np.random.default_rng(6)), 2)
    psi = purify_symmetric(omega, 2, 2)
    assert purification_overlap(psi, psi) == pytest.approx(1.0)


def test_purification_rejects_non_invariant_state():
    omega = tensor(np.diag([1.0, 0.0]), np.diag([0.5, 0.5]))
    with pytest.raises(ValidationError):
        purify_symmetric(omega, 2, 2)
