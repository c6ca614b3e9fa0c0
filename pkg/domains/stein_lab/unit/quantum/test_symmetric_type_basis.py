"""
Unit tests for operators on the symmetric subspace written in the type
basis, checked against the dense tensor space.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from stein_lab.errors import SizeGuardError, ValidationError
from stein_lab.config import tolerance_override
from stein_lab.linalg import trace_out_last
from stein_lab.linalg.sampling import random_hermitian
from stein_lab.quantum import SymTypeOperator, sym_basis_matrix, sym_basis_vector, sym_overlap, sym_partial_trace
from stein_lab.typeclasses import TypeVector, enumerate_types


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def _random(n, d, seed):
    return SymTypeOperator(n, d, random_hermitian(len(enumerate_types(n, d)), np.random.default_rng(seed)))


@pytest.mark.parametrize("n,d", [(1, 2), (3, 2), (2, 3), (4, 3)])
def test_basis_is_an_isometry(n, d):
    v = sym_basis_matrix(n, d)
    assert v.T @ v == pytest.approx(np.eye(v.shape[1]), abs=1e-12)


def test_basis_vector_matches_column():
    t = TypeVector(3, (1, 2))
    column = sym_basis_matrix(3, 2)[:, 2]
    assert np.allclose(sym_basis_vector(3, t).amplitudes, column)
    assert np.count_nonzero(column) == 3
    assert np.max(column) == pytest.approx(1.0 / math.sqrt(3.0))


def test_basis_vector_rejects_foreign_type():
    with pytest.raises(ValidationError):
        sym_basis_vector(4, TypeVector(3, (1, 2)))


def test_dense_guard():
    with tolerance_override(dense_guard=256):
        with pytest.raises(SizeGuardError):
            sym_basis_matrix(9, 2)


def test_overlap_with_product_prefix():
    value, residual = sym_overlap(1, TypeVector(1, (1, 0)), 2, TypeVector(2, (1, 1)))
    assert value == pytest.approx(math.sqrt(0.5))
    assert residual == TypeVector(1, (0, 1))
    assert sym_overlap(2, TypeVector(2, (2, 0)), 2, TypeVector(2, (1, 1))) == (0.0, None)


def test_dense_round_trip_inside_sym():
    op = _random(3, 2, seed=1)
    back = SymTypeOperator.from_dense(op.to_dense(), 2, 3)
    assert back.matrix == pytest.approx(op.matrix, abs=1e-12)


@pytest.mark.parametrize("n,r,d", [(2, 1, 2), (4, 1, 2), (4, 2, 2), (3, 2, 3)])
def test_partial_trace_matches_dense(n, r, d):
    """
    Invariant:
    the type-basis partial trace is the dense partial trace restricted to Sym.
    """
    op = _random(n, d, seed=n + r + d)
    reduced = sym_partial_trace(n, r, op)
    assert reduced.n == n - r
    dense = trace_out_last(op.to_dense(), d, n, r)
    assert reduced.to_dense() == pytest.approx(dense, abs=1e-10)
    assert reduced.trace() == pytest.approx(op.trace(), abs=1e-10)


def test_partial_trace_of_zero_sites_is_identity():
    op = _random(3, 2, seed=2)
    assert sym_partial_trace(3, 0, op) is op


def test_operator_arithmetic_checks_spaces():
    a, b = _random(2, 2, seed=3), _random(3, 2, seed=4)
    assert (a - a).trace_norm() == pytest.approx(0.0)
    assert (a + a.scaled(-1.0)).trace_norm() == pytest.approx(0.0)
    with pytest.raises(ValidationError):
        a + b


def test_ketbra_entry_and_serialization():
    t, s = TypeVector(2, (2, 0)), TypeVector(2, (1, 1))
    op = SymTypeOperator.ketbra(t, s)
    assert op.entry(t, s) == 1.0
    assert op.entry(s, t) == 0.0
    assert op.hermiticity_residual() == 1.0
    assert op.to_dict()["types"] == [[2, 0], [1, 1], [0, 2]]


def test_shape_is_validated():
    with pytest.raises(ValidationError):
        SymTypeOperator(2, 2, np.eye(2))
