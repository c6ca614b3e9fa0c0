"""
Quick lemma suites behind the check-lemmas verb.

Each suite evaluates one property over a grid or a batch of seeded
instances and folds the per-instance records into a single worst-case
record, so a report stays readable while still naming the offending
instance.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import replace
from typing import Callable, Iterable, Sequence

import numpy as np

from stein_lab.classical.typicality import sanov_pinsker_bound, typicality_mass
from stein_lab.config import get_tolerances
from stein_lab.divergences import (
    as_float,
    d_H,
    d_H_classical,
    d_max,
    d_max_classical,
    d_max_smoothed_classical,
    dtilde_max,
    dtilde_max_classical,
    rel_ent_to_hull,
    umegaki,
)
from stein_lab.errors import ValidationError
from stein_lab.free_sets import build_product_family
from stein_lab.hypergeometric import bosonic_entropy, hyp_pmf_vector, multivariate_pmf_table, tail_bounds, tail_mass
from stein_lab.linalg import (
    fidelity,
    positive_part_witness,
    purification_overlap,
    purify_symmetric,
    root_overlap,
    symmetrize,
    trace_distance,
    trace_out_last,
    trace_positive_part,
)
from stein_lab.linalg.sampling import random_density_matrix, random_hermitian
from stein_lab.quantum import (
    SymTypeOperator,
    check_asymptotic_continuity,
    check_output_norm,
    check_tail_filtering,
    d_r_bound_sweep,
    gamma,
    kraus_family,
    random_deficient_operator,
    random_tail_filtering_instance,
    sym_partial_trace,
    theta_completeness_residual,
)
from stein_lab.typeclasses import count_matrix, enumerate_types, multinomial, type_count
from stein_lab.verdicts import CheckRecord, Verdict, inequality

logger = logging.getLogger(__name__)

_SEVERITY = {Verdict.FAIL: 0, Verdict.INCONCLUSIVE: 1, Verdict.PASS: 2, Verdict.INAPPLICABLE: 3}


def worst_case(name: str, records: Sequence[CheckRecord]) -> CheckRecord:
    """The most severe record (smallest slack among equals), renamed and counted."""
    if not records:
        raise ValidationError(f"suite {name} produced no records", field="records")
    worst = min(records, key=lambda rec: (_SEVERITY[rec.verdict], rec.slack))
    terms = dict(worst.terms)
    terms.update({"instances": len(records), "worst_instance": worst.name})
    return replace(worst, name=name, terms=terms, runtime_s=sum(rec.runtime_s for rec in records))


def max_violation(name: str, gaps: Iterable[float], *, tol: float, **terms: object) -> CheckRecord:
    """Record for max(gaps) <= 0; each gap is lhs - rhs of one instance."""
    values = list(gaps)
    return inequality(name, max(values), 0.0, terms={"instances": len(values), **terms}, tol=tol)


# ---------------------------------------------------------------------
# TYPES AND HYPERGEOMETRIC
# ---------------------------------------------------------------------

def type_counting(n_max: int = 12, alphabet_max: int = 4) -> CheckRecord:
    """|T_n| = C(n+k-1, k-1) and sum_t multinomial(t) = k^n."""
    gaps = []
    for n, k in itertools.product(range(1, n_max + 1), range(1, alphabet_max + 1)):
        types = enumerate_types(n, k)
        gaps.append(abs(len(types) - math.comb(n + k - 1, k - 1)))
        gaps.append(abs(type_count(n, k) - len(types)))
        gaps.append(abs(sum(multinomial(t) for t in types) - k ** n))
    return max_violation("type_counting", gaps, tol=0.0, n_max=n_max, alphabet_max=alphabet_max)


def hypergeometric_duality(N_max: int = 40) -> CheckRecord:
    """H(N,K;n,k) = H(N,n;K,k) = H(N,N-K;n,n-k), exhaustively."""
    worst = 0.0
    for N in range(1, N_max + 1):
        for K, n in itertools.product(range(N + 1), repeat=2):
            pmf = hyp_pmf_vector(N, K, n)
            swapped = hyp_pmf_vector(N, n, K)
            common = min(n, K) + 1
            worst = max(worst, float(np.max(np.abs(pmf[:common] - swapped[:common]))))
            complement = hyp_pmf_vector(N, N - K, n)[::-1]
            worst = max(worst, float(np.max(np.abs(pmf - complement))))
    return inequality("hypergeometric_duality", worst, 0.0, terms={"N_max": N_max}, tol=1e-12)


def hypergeometric_tails(N_max: int = 40, radii: Sequence[float] = (0.05, 0.1, 0.2, 0.3)) -> CheckRecord:
    """tail_mass <= basic always, <= tight whenever n >= N/2."""
    gaps = []
    for N in range(1, N_max + 1):
        for K, n in itertools.product(range(N + 1), range(1, N + 1)):
            for u in radii:
                mass = tail_mass(N, K, n, u)
                basic, tight = tail_bounds(N, K, n, u)
                gaps.append(mass - basic)
                if 2 * n >= N and n < N:
                    gaps.append(mass - tight)
    return max_violation("hypergeometric_tails", gaps, tol=1e-12, N_max=N_max)


def hypergeometric_lower_bound(N_max: int = 24, alphabet_max: int = 3) -> CheckRecord:
    """multivariate_pmf(N,s;n,t) >= 2^{-n g(N/n - 1)} whenever nt is dominated by Ns, exhaustively."""
    worst, pairs = -math.inf, 0
    for k in range(2, alphabet_max + 1):
        for N in range(1, N_max + 1):
            s_counts = count_matrix(N, k)
            for n in range(1, N + 1):
                t_counts = count_matrix(n, k)
                dominated = np.all(t_counts[:, None, :] <= s_counts[None, :, :], axis=-1)
                pmf = multivariate_pmf_table(N, s_counts, n, t_counts)[dominated]
                bound = 2.0 ** (-n * bosonic_entropy(N / n - 1.0))
                worst = max(worst, float(np.max(bound - pmf)))
                pairs += int(dominated.sum())
    return inequality(
        "hypergeometric_lower_bound",
        worst,
        0.0,
        terms={"N_max": N_max, "alphabet_max": alphabet_max, "pairs": pairs},
        tol=1e-12,
    )


def concentration_step(rng: np.random.Generator, instances: int = 20) -> CheckRecord:
    """1 - p^{⊗n}(delta-ball) <= (n+1)^{|X|} 2^{-2 n delta^2}."""
    gaps = []
    for _ in range(instances):
        k = int(rng.integers(2, 4))
        n = int(rng.integers(2, 25))
        delta = float(rng.uniform(0.05, 0.5))
        p = rng.dirichlet(np.ones(k))
        gaps.append((1.0 - typicality_mass(p, n, delta)) - sanov_pinsker_bound(n, k, delta))
    return max_violation("concentration_step", gaps, tol=1e-12)


# ---------------------------------------------------------------------
# STATES AND POSITIVE PARTS
# ---------------------------------------------------------------------

def fidelity_chain(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """1 - F <= 1 - Tr[sqrt(rho) sqrt(sigma)] <= T <= sqrt(1 - F^2)."""
    gaps = []
    for _ in range(instances):
        dim = int(rng.integers(2, 7))
        rho, sigma = random_density_matrix(dim, rng), random_density_matrix(dim, rng)
        f = fidelity(rho, sigma)
        overlap = root_overlap(rho, sigma)
        t = trace_distance(rho, sigma)
        gaps += [(1.0 - f) - (1.0 - overlap), (1.0 - overlap) - t, t - math.sqrt(max(0.0, 1.0 - f * f))]
    return max_violation("fidelity_chain", gaps, tol=get_tolerances().spectral)


def positive_part_identities(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """Both variational witnesses are feasible and attain Tr X_+; Tr(X+Y)_+ <= Tr X_+ + Tr Y_+."""
    gaps = []
    for _ in range(instances):
        dim = int(rng.integers(2, 9))
        x, y = random_hermitian(dim, rng), random_hermitian(dim, rng)
        gaps.append(max(positive_part_witness(x).residuals(x).values()))
        gaps.append(trace_positive_part(x + y) - trace_positive_part(x) - trace_positive_part(y))
    return max_violation("positive_part_identities", gaps, tol=get_tolerances().spectral)


def positive_part_data_processing(rng: np.random.Generator, instances: int = 30) -> CheckRecord:
    """Tr(C(X))_+ <= Tr X_+ for symmetrisation and partial trace on two qubits."""
    gaps = []
    for _ in range(instances):
        x = random_hermitian(4, rng)
        before = trace_positive_part(x)
        gaps.append(trace_positive_part(symmetrize(x, 2, 2)) - before)
        gaps.append(trace_positive_part(trace_out_last(x, 2, 2, 1)) - before)
    return max_violation("positive_part_data_processing", gaps, tol=get_tolerances().spectral)


def purification_overlap_bound(rng: np.random.Generator, instances: int = 20) -> CheckRecord:
    """Symmetric purifications of symmetric omega, tau overlap at least 1 - T(omega, tau)."""
    gaps = []
    for _ in range(instances):
        omega = symmetrize(random_density_matrix(4, rng), 2, 2)
        tau = symmetrize(random_density_matrix(4, rng), 2, 2)
        overlap = purification_overlap(purify_symmetric(omega, 2, 2), purify_symmetric(tau, 2, 2))
        gaps.append((1.0 - trace_distance(omega, tau)) - overlap)
    return max_violation("purification_overlap", gaps, tol=get_tolerances().spectral)


# ---------------------------------------------------------------------
# DIVERGENCES
# ---------------------------------------------------------------------

def relative_below_max(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """D(rho||sigma) <= D_max(rho||sigma)."""
    records = []
    for i in range(instances):
        dim = int(rng.integers(2, 5))
        rho, sigma = random_density_matrix(dim, rng), random_density_matrix(dim, rng)
        records.append(inequality(f"relative_below_max[{i}]", umegaki(rho, sigma), d_max(rho, sigma)))
    return worst_case("relative_below_max", records)


def _random_pair(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    k = int(rng.integers(2, 7))
    return rng.dirichlet(np.ones(k)), rng.dirichlet(np.ones(k))


def smoothing_sandwich(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """
    D~^eps <= D_max^eps <= D~^eps + log 1/(1-eps), classical instances.

    The smoothing ball is a trace-distance ball, so the upper side keeps the
    same eps: cutting p at 2^lambda q and renormalising moves p by at most eps.
    """
    records = []
    for i in range(instances):
        p, q = _random_pair(rng)
        eps = float(rng.uniform(0.01, 0.4))
        smoothed = d_max_smoothed_classical(p, q, eps)
        tilde = dtilde_max_classical(p, q, eps)
        records.append(inequality(f"sandwich_lower[{i}]", tilde, smoothed))
        shift = -math.log2(1.0 - eps)
        records.append(inequality(f"sandwich_upper[{i}]", smoothed, (tilde.lower + shift, tilde.upper + shift)))
    return worst_case("smoothing_sandwich", records)


def weak_converse_duality(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """D_H^{1-eps-eta} + log eta <= D_max^eps <= D_H^{1-eps}, classical instances."""
    records = []
    for i in range(instances):
        p, q = _random_pair(rng)
        eps = float(rng.uniform(0.05, 0.45))
        eta = float(rng.uniform(0.05, 0.45))
        smoothed = d_max_smoothed_classical(p, q, eps)
        records.append(inequality(f"duality_upper[{i}]", smoothed, d_H_classical(p, q, 1.0 - eps)))
        low = d_H_classical(p, q, 1.0 - eps - eta)
        shifted = (low.lower + math.log2(eta), low.upper + math.log2(eta))
        records.append(inequality(f"duality_lower[{i}]", shifted, smoothed))
    return worst_case("weak_converse_duality", records)


def d_max_triangle(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    """D_max(p||r) <= D_max(p||q) + D_max(q||r), classical triples."""
    records = []
    for i in range(instances):
        k = int(rng.integers(2, 7))
        p, q, r = (rng.dirichlet(np.ones(k)) for _ in range(3))
        through = d_max_classical(p, q) + d_max_classical(q, r)
        records.append(inequality(f"d_max_triangle[{i}]", d_max_classical(p, r), through))
    return worst_case("d_max_triangle", records)


def dtilde_triangle(rng: np.random.Generator, instances: int = 30) -> CheckRecord:
    """D~^eps(rho||sigma) <= D~^eps(rho||omega) + D_max(omega||sigma), quantum triples."""
    records = []
    for i in range(instances):
        dim = int(rng.integers(2, 5))
        rho, omega, sigma = (random_density_matrix(dim, rng) for _ in range(3))
        eps = float(rng.uniform(0.01, 0.4))
        via = dtilde_max(rho, omega, eps)
        hop = as_float(d_max(omega, sigma))
        records.append(
            inequality(
                f"dtilde_triangle[{i}]",
                dtilde_max(rho, sigma, eps),
                (via.lower + hop, via.upper + hop),
                terms={"eps": eps, "d_max_omega_sigma": hop},
            )
        )
    return worst_case("dtilde_triangle", records)


def d_H_data_processing(rng: np.random.Generator, instances: int = 30) -> CheckRecord:
    """D_H^eps(C(rho)||C(sigma)) <= D_H^eps(rho||sigma) for symmetrisation and partial trace on two qubits."""
    channels: dict[str, Callable[[np.ndarray], np.ndarray]] = {
        "symmetrize": lambda x: symmetrize(x, 2, 2),
        "trace_out_last": lambda x: trace_out_last(x, 2, 2, 1),
    }
    records = []
    for i in range(instances):
        rho, sigma = random_density_matrix(4, rng), random_density_matrix(4, rng)
        eps = float(rng.uniform(0.05, 0.5))
        before = d_H(rho, sigma, eps)
        for label, channel in channels.items():
            after = d_H(channel(rho), channel(sigma), eps)
            records.append(inequality(f"d_H_data_processing[{label},{i}]", after, before, terms={"eps": eps}))
    return worst_case("d_H_data_processing", records)


def relative_to_set_nesting(rng: np.random.Generator, instances: int = 20) -> CheckRecord:
    """D(rho||hull(G)) <= D(rho||hull(G')) whenever G' is a subset of G."""
    tol = 2.0 * get_tolerances().fw_gap
    records = []
    for i in range(instances):
        dim = int(rng.integers(2, 4))
        rho = random_density_matrix(dim, rng)
        generators = [random_density_matrix(dim, rng) for _ in range(4)]
        small, large = rel_ent_to_hull(rho, generators[:2]), rel_ent_to_hull(rho, generators)
        records.append(inequality(f"relative_to_set_nesting[{i}]", large, small, tol=tol))
    return worst_case("relative_to_set_nesting", records)


def hull_segment_minimum(rho: np.ndarray, sigma_0: np.ndarray, sigma_1: np.ndarray, steps: int = 10_000) -> float:
    """min over w in [0, 1] of D(rho||(1-w) sigma_0 + w sigma_1) on a uniform grid."""
    values = [as_float(umegaki(rho, (1.0 - w) * sigma_0 + w * sigma_1)) for w in np.linspace(0.0, 1.0, steps + 1)]
    return min(values)


def relative_to_set_grid(rng: np.random.Generator, instances: int = 4) -> CheckRecord:
    """
    rel_ent_to_hull of a two-generator qubit hull against the grid minimum
    over the segment, starting from diag(3/4, 1/4) against {|0><0|, |1><1|}
    and {|0><0|, |+><+|}.
    """
    zero, one = np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    rho = np.diag([0.75, 0.25]).astype(complex)
    cases = [(rho, zero, one), (rho, zero, plus)]
    cases += [tuple(random_density_matrix(2, rng) for _ in range(3)) for _ in range(instances)]
    gaps = []
    for r, s0, s1 in cases:
        gaps.append(abs(rel_ent_to_hull(r, [s0, s1]).as_float() - hull_segment_minimum(r, s0, s1)))
    return max_violation("relative_to_set_grid", gaps, tol=10.0 * get_tolerances().fw_gap, steps=10_000)


def asymptotic_continuity_batch(rng: np.random.Generator, instances: int = 20, max_level: int = 2) -> CheckRecord:
    """Continuity of D(.||F_n) on the qubit product family, n <= max_level; F_n holds a state >= c^n 1."""
    zero, one = np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    family = build_product_family([zero, one, plus], max_level)
    records = []
    for i in range(instances):
        n = int(rng.integers(1, max_level + 1))
        rho = random_density_matrix(2 ** n, rng)
        t = float(rng.uniform(0.01, 0.3))
        rho_prime = (1.0 - t) * rho + t * random_density_matrix(2 ** n, rng)
        records.append(
            check_asymptotic_continuity(rho, rho_prime, family.generators(n), family.c ** n, name=f"asymptotic_continuity[{i}]")
        )
    return worst_case("asymptotic_continuity", records)


# ---------------------------------------------------------------------
# SYMMETRIC SUBSPACE
# ---------------------------------------------------------------------

def random_sym_operator(n: int, d: int, rng: np.random.Generator) -> SymTypeOperator:
    size = len(enumerate_types(n, d))
    return SymTypeOperator(n, d, random_hermitian(size, rng))


def sym_partial_trace_oracle(rng: np.random.Generator, n_max: int = 4) -> CheckRecord:
    """Type-basis partial trace agrees with the dense partial trace, d = 2."""
    gaps = []
    for n in range(1, n_max + 1):
        for r in range(n):
            x = random_sym_operator(n, 2, rng)
            dense = trace_out_last(x.to_dense(), 2, n, r)
            gaps.append(float(np.max(np.abs(sym_partial_trace(n, r, x).to_dense() - dense))))
    return max_violation("sym_partial_trace_oracle", gaps, tol=get_tolerances().spectral, n_max=n_max)


def kraus_identity(rng: np.random.Generator, n_max: int = 5, dims: Sequence[int] = (2, 3), per_config: int = 3) -> CheckRecord:
    """Gamma_{n,r}(X) = sum_w M_{r,w} X M_{r,w}^dagger."""
    worst = 0.0
    for n, d in itertools.product(range(1, n_max + 1), dims):
        for r in range(n + 1):
            family = kraus_family(n, r, d)
            for _ in range(per_config):
                x = random_sym_operator(n, d, rng)
                worst = max(worst, (gamma(n, r, x) - family.apply(x)).trace_norm())
    return inequality("kraus_identity", worst, 0.0, terms={"n_max": n_max, "dims": list(dims)}, tol=get_tolerances().spectral)


def theta_identity(n_max: int = 6, dims: Sequence[int] = (2, 3)) -> CheckRecord:
    """sum_w N_{r,w}^dagger N_{r,w} = 1 for the normalised Kraus family."""
    worst = max(
        theta_completeness_residual(n, r, d)
        for n, d in itertools.product(range(1, n_max + 1), dims)
        for r in range(1, n + 1)
    )
    return inequality("theta_identity", worst, 0.0, terms={"n_max": n_max}, tol=get_tolerances().spectral)


def tail_filtering_batch(rng: np.random.Generator, instances: int = 100) -> CheckRecord:
    records = []
    for i in range(instances):
        dim = int(rng.integers(3, 9))
        vdim = int(rng.integers(1, dim))
        t, basis, z = random_tail_filtering_instance(dim, vdim, float(rng.uniform(0.0, 0.95)), rng)
        records.append(check_tail_filtering(t, basis, z, name=f"tail_filtering[{i}]"))
    return worst_case("tail_filtering", records)


def output_norm_batch(rng: np.random.Generator, n_max: int = 20) -> CheckRecord:
    """Every n <= n_max, every threshold N < n and every delta = j/n <= 1/2, one deficient operator each, d = 2."""
    records = []
    for n in range(2, n_max + 1):
        for j, N in itertools.product(range(1, n // 2 + 1), range(1, n)):
            delta = j / n
            x = random_deficient_operator(n, 2, N, rng)
            records.append(check_output_norm(n, N, delta, x, name=f"output_norm[n={n},N={N},delta={delta:g}]"))
    return worst_case("output_norm", records)


def d_r_decay(n_max: int = 20) -> CheckRecord:
    return worst_case("d_r_bound", d_r_bound_sweep(n_max))


# ---------------------------------------------------------------------
# ENTRY POINT
# ---------------------------------------------------------------------

def run_lemma_suites(
    rng: np.random.Generator,
    *,
    instances: int = 100,
    hyp_N_max: int = 40,
    lower_bound_N_max: int = 24,
    kraus_n_max: int = 5,
    d_r_n_max: int = 20,
    tail_instances: int = 100,
    output_norm_n_max: int = 20,
) -> list[CheckRecord]:
    suites: list[tuple[str, Callable[[], CheckRecord]]] = [
        ("type_counting", type_counting),
        ("hypergeometric_duality", lambda: hypergeometric_duality(hyp_N_max)),
        ("hypergeometric_tails", lambda: hypergeometric_tails(hyp_N_max)),
        ("hypergeometric_lower_bound", lambda: hypergeometric_lower_bound(lower_bound_N_max)),
        ("concentration_step", lambda: concentration_step(rng)),
        ("fidelity_chain", lambda: fidelity_chain(rng, instances)),
        ("positive_part_identities", lambda: positive_part_identities(rng, instances)),
        ("positive_part_data_processing", lambda: positive_part_data_processing(rng)),
        ("purification_overlap", lambda: purification_overlap_bound(rng)),
        ("relative_below_max", lambda: relative_below_max(rng, instances)),
        ("smoothing_sandwich", lambda: smoothing_sandwich(rng, instances)),
        ("weak_converse_duality", lambda: weak_converse_duality(rng, instances)),
        ("d_max_triangle", lambda: d_max_triangle(rng, instances)),
        ("dtilde_triangle", lambda: dtilde_triangle(rng)),
        ("d_H_data_processing", lambda: d_H_data_processing(rng)),
        ("relative_to_set_nesting", lambda: relative_to_set_nesting(rng)),
        ("relative_to_set_grid", lambda: relative_to_set_grid(rng)),
        ("sym_partial_trace_oracle", lambda: sym_partial_trace_oracle(rng)),
        ("kraus_identity", lambda: kraus_identity(rng, kraus_n_max)),
        ("theta_identity", lambda: theta_identity(kraus_n_max)),
        ("d_r_bound", lambda: d_r_decay(d_r_n_max)),
        ("tail_filtering", lambda: tail_filtering_batch(rng, tail_instances)),
        ("output_norm", lambda: output_norm_batch(rng, output_norm_n_max)),
        ("asymptotic_continuity", lambda: asymptotic_continuity_batch(rng)),
    ]
    records = []
    for name, suite in suites:
        started = time.perf_counter()
        record = suite()
        records.append(record.with_runtime(time.perf_counter() - started))
        logger.debug("lemma_suite name=%s verdict=%s", name, record.verdict.value)
    return records
