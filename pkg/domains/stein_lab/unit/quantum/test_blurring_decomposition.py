"""
Unit tests for the quantum blurring maps, the Gamma decomposition, its
Kraus operators and the normalised channel Theta.
"""

from __future__ import annotations

import numpy as np
import pytest

from stein_lab.errors import PreconditionError
from stein_lab.linalg.functions import trace_norm
from stein_lab.linalg.sampling import random_density_matrix, random_hermitian
from stein_lab.quantum import (
    SymTypeOperator,
    appended_copies,
    blur_q,
    blur_q_average,
    blur_q_dense,
    blur_rho,
    blurring_average_weights,
    check_delta,
    d_r_diag,
    gamma,
    gamma_dense,
    kraus_family,
    mixing_weights,
    sandwich_d_r,
    theta,
    theta_completeness_residual,
)
from stein_lab.typeclasses import enumerate_types


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


def _hermitian(n, d, seed):
    return SymTypeOperator(n, d, random_hermitian(len(enumerate_types(n, d)), np.random.default_rng(seed)))


def _state(n, d, seed):
    return SymTypeOperator(n, d, random_density_matrix(len(enumerate_types(n, d)), np.random.default_rng(seed)))


# ============================================================
# PARAMETERS
# ============================================================

def test_appended_copies_floor():
    assert appended_copies(10, 0.3) == 3
    assert appended_copies(100, 0.29) == 29
    assert appended_copies(7, 0.1) == 0


@pytest.mark.parametrize("delta", [0.0, 0.51, -0.1])
def test_delta_outside_half_interval(delta):
    with pytest.raises(PreconditionError) as excinfo:
        check_delta(delta)
    assert str(excinfo.value) == "delta must be in (0, 1/2]"


def test_mixing_weights_sum_to_one():
    for n, k in [(4, 2), (10, 5), (30, 3)]:
        assert mixing_weights(n, k).sum() == pytest.approx(1.0)
        assert mixing_weights(n, k).size == k + 1


def test_average_weights_sum_to_one():
    for n in (3, 8, 21):
        weights = blurring_average_weights(n, 0.5)
        assert sum(weights.values()) == pytest.approx(1.0)
        assert max(weights) <= appended_copies(n, 0.5)


# ============================================================
# DENSE ORACLES
# ============================================================

@pytest.mark.parametrize("n,r,d", [(3, 1, 2), (3, 2, 2), (2, 1, 3)])
def test_gamma_matches_dense(n, r, d):
    x = _hermitian(n, d, seed=10 * n + r)
    assert gamma(n, r, x).to_dense() == pytest.approx(gamma_dense(n, r, x.to_dense(), d), abs=1e-10)


@pytest.mark.parametrize("n,delta,d", [(3, 0.5, 2), (4, 0.25, 2), (2, 0.5, 3)])
def test_blur_q_matches_vacuum_blur_rho(n, delta, d):
    """
    Invariant:
    blur_q equals Pi_n blur_rho(|0><0|) Pi_n on Sym^n.
    """
    x = _hermitian(n, d, seed=n + d)
    assert blur_q(n, delta, x).to_dense() == pytest.approx(blur_q_dense(n, delta, x.to_dense(), d), abs=1e-10)


def test_blur_q_is_trace_non_increasing():
    for seed in range(5):
        state = _state(4, 2, seed)
        assert blur_q(4, 0.5, state).trace().real <= 1.0 + 1e-12
        assert blur_q_average(4, 0.5, state).trace().real <= 1.0 + 1e-12


def test_blur_rho_is_trace_preserving():
    rng = np.random.default_rng(6)
    sigma = random_density_matrix(2, rng)
    x = random_density_matrix(8, rng)
    out = blur_rho(3, 0.5, sigma, x)
    assert np.trace(out).real == pytest.approx(1.0)


# ============================================================
# KRAUS AND THETA
# ============================================================

@pytest.mark.parametrize("n,r,d", [(3, 1, 2), (5, 2, 2), (4, 2, 3)])
def test_kraus_completeness_is_diagonal(n, r, d):
    family = kraus_family(n, r, d)
    assert family.diagonal_residual() < 1e-12
    x = _hermitian(n, d, seed=r)
    assert family.apply(x).matrix == pytest.approx(gamma(n, r, x).matrix)


def test_d_r_is_one_on_vacuum_and_positive():
    diag = d_r_diag(6, 3, 2)
    assert diag[0] == pytest.approx(1.0)
    assert np.all(diag > 0.0)
    assert np.all(diag <= 1.0 + 1e-12)


@pytest.mark.parametrize("n,r,d", [(4, 1, 2), (6, 3, 2), (3, 2, 3)])
def test_theta_is_a_channel(n, r, d):
    assert theta_completeness_residual(n, r, d) < 1e-10


def test_theta_of_sandwich_is_gamma():
    """
    Invariant:
    Gamma_{n,r}(X) = Theta_{n,r}(D_r^{1/2} X D_r^{1/2}).
    """
    x = _hermitian(5, 2, seed=12)
    assert theta(5, 2, sandwich_d_r(5, 2, x)).matrix == pytest.approx(gamma(5, 2, x).matrix, abs=1e-12)


@pytest.mark.slow
@pytest.mark.exhaustive
def test_kraus_sum_reproduces_gamma_exhaustive():
    """
    Invariant:
    ||Gamma_{n,r}(X) - sum_w M_{r,w} X M_{r,w}^dagger||_1 <= 1e-10 for n <= 8, d in {2, 3}.
    """
    for d in (2, 3):
        for n in range(1, 9):
            size = len(enumerate_types(n, d))
            for r in range(1, n + 1):
                operators = list(kraus_family(n, r, d).operators.values())
                rng = np.random.default_rng(1000 * d + 10 * n + r)
                for _ in range(100):
                    x = SymTypeOperator(n, d, random_hermitian(size, rng))
                    summed = sum(m @ x.matrix @ m.conj().T for m in operators)
                    assert trace_norm(gamma(n, r, x).matrix - summed) <= 1e-10
