"""
Hypergeometric distributions, their duality, tail bounds and the
g-based lower bound.

Probabilities are evaluated as log-gamma sums and exponentiated last, so
urns of size 10^4 do not overflow. The *_exact variants use big integers
and Fractions and serve as oracles.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, xlogy

from stein_lab.errors import PreconditionError, ValidationError
from stein_lab.typeclasses import TypeVector, leq_elementwise


def log_comb(n, k):
    """log C(n, k), -inf where the binomial vanishes; broadcasts over arrays."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n) & (n >= 0)
    safe_n = np.where(valid, n, 0.0)
    safe_k = np.where(valid, k, 0.0)
    out = gammaln(safe_n + 1) - gammaln(safe_k + 1) - gammaln(safe_n - safe_k + 1)
    out = np.where(valid, out, -np.inf)
    return out if out.ndim else float(out)


def _check_urn(N: int, K: int, n: int) -> None:
    if not (N >= K >= 0 and N >= n >= 0):
        raise ValidationError(f"invalid urn (N, K, n) = ({N}, {K}, {n})", field="N")


# ---------------------------------------------------------------------
# BIVARIATE
# ---------------------------------------------------------------------

def hyp_pmf(N: int, K: int, n: int, k: int) -> float:
    """P(k white in n draws without replacement from N marbles, K of them white)."""
    _check_urn(N, K, n)
    if not 0 <= k <= n:
        raise ValidationError(f"k={k} outside [0, {n}]", field="k")
    log_p = log_comb(K, k) + log_comb(N - K, n - k) - log_comb(N, n)
    return float(math.exp(log_p)) if log_p != -np.inf else 0.0


def hyp_pmf_exact(N: int, K: int, n: int, k: int) -> Fraction:
    _check_urn(N, K, n)
    if not 0 <= k <= n:
        raise ValidationError(f"k={k} outside [0, {n}]", field="k")
    if k > K or n - k > N - K:
        return Fraction(0)
    return Fraction(math.comb(K, k) * math.comb(N - K, n - k), math.comb(N, n))


def hyp_pmf_vector(N: int, K: int, n: int) -> np.ndarray:
    """pmf over k = 0..n."""
    _check_urn(N, K, n)
    k = np.arange(n + 1)
    log_p = log_comb(K, k) + log_comb(N - K, n - k) - log_comb(N, n)
    return np.exp(log_p)


def tail_mass(N: int, K: int, n: int, u: float) -> float:
    """Mass of {k : |k/n - K/N| > u}."""
    if u <= 0:
        raise ValidationError("u must be positive", field="u")
    if n == 0:
        return 0.0
    pmf = hyp_pmf_vector(N, K, n)
    k = np.arange(n + 1)
    outside = np.abs(k / n - K / N) > u
    return float(np.sum(pmf[outside]))


def tail_bounds(N: int, K: int, n: int, u: float) -> tuple[float, float]:
    """
    (basic, tight) = (2 exp(-2 n u^2), 2 exp(-2 n^2 u^2 / (N - n))).

    The tight form is only claimed for n >= N/2.
    """
    _check_urn(N, K, n)
    if u <= 0:
        raise ValidationError("u must be positive", field="u")
    basic = 2.0 * math.exp(-2.0 * n * u * u)
    tight = 0.0 if N == n else 2.0 * math.exp(-2.0 * n * n * u * u / (N - n))
    return basic, tight


# ---------------------------------------------------------------------
# MULTIVARIATE
# ---------------------------------------------------------------------

def _check_multivariate(N: int, s: TypeVector, n: int, t: TypeVector) -> None:
    if s.n != N or t.n != n:
        raise ValidationError("type lengths do not match (N, n)", field="s")
    if N < n:
        raise ValidationError(f"cannot draw n={n} from N={N}", field="n")
    if s.alphabet_size != t.alphabet_size:
        raise ValidationError("alphabet sizes differ", field="t")


def multivariate_pmf(N: int, s: TypeVector, n: int, t: TypeVector) -> float:
    """prod_x C(N s(x), n t(x)) / C(N, n)."""
    _check_multivariate(N, s, n, t)
    if not leq_elementwise(t, s):
        return 0.0
    log_p = float(np.sum(log_comb(np.array(s.counts), np.array(t.counts)))) - log_comb(N, n)
    return math.exp(log_p)


def multivariate_pmf_ratio(N: int, s: TypeVector, n: int, t: TypeVector) -> float:
    """C(n, nt) C(N-n, Ns-nt) / C(N, Ns) with multinomial C."""
    _check_multivariate(N, s, n, t)
    if not leq_elementwise(t, s):
        return 0.0
    sc, tc = np.array(s.counts, dtype=float), np.array(t.counts, dtype=float)

    def log_multinomial(total: float, parts: np.ndarray) -> float:
        return float(gammaln(total + 1) - np.sum(gammaln(parts + 1)))

    log_p = log_multinomial(n, tc) + log_multinomial(N - n, sc - tc) - log_multinomial(N, sc)
    return math.exp(log_p)


def multivariate_pmf_exact(N: int, s: TypeVector, n: int, t: TypeVector) -> Fraction:
    _check_multivariate(N, s, n, t)
    if not leq_elementwise(t, s):
        return Fraction(0)
    numerator = math.prod(math.comb(a, b) for a, b in zip(s.counts, t.counts))
    return Fraction(numerator, math.comb(N, n))


def multivariate_pmf_table(N: int, s_counts: np.ndarray, n: int, t_counts: np.ndarray) -> np.ndarray:
    """
    Vectorised pmf for many (s, t) pairs.

    s_counts has shape (S, |X|) with rows summing to N; t_counts has shape
    (T, |X|) with rows summing to n. Returns an array of shape (T, S).
    """
    s = np.asarray(s_counts, dtype=float)[None, :, :]
    t = np.asarray(t_counts, dtype=float)[:, None, :]
    s_full, t_full = np.broadcast_arrays(s, t)
    log_p = np.sum(log_comb(s_full, t_full), axis=-1)
    return np.exp(log_p - log_comb(N, n))


# ---------------------------------------------------------------------
# ENTROPIES AND THE LOWER BOUND
# ---------------------------------------------------------------------

def bosonic_entropy(x):
    """g(x) = (x+1) log2(x+1) - x log2 x, with g(0) = 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValidationError("g is defined on x >= 0", field="x")
    out = (xlogy(x + 1.0, x + 1.0) - xlogy(x, x)) / math.log(2)
    return out if out.ndim else float(out)


g = bosonic_entropy


def hyp_lower_bound(N: int, s: TypeVector, n: int, t: TypeVector) -> float:
    """2^{-n g(N/n - 1)}, a lower bound on multivariate_pmf whenever nt ⪯ Ns."""
    _check_multivariate(N, s, n, t)
    if not leq_elementwise(t, s):
        raise PreconditionError(f"n*t={t.counts} is not dominated by N*s={s.counts}")
    if n == 0:
        return 1.0
    return 2.0 ** (-n * bosonic_entropy(N / n - 1.0))
