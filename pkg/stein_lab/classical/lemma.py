"""
One-shot classical blurring lemma, checked on type space.

For p_n (1-eta)-concentrated on the delta-ball around s and m = ceil(2 delta n):

    D_max^eta(p_n || B_{n,m}(q_n)) <= -log2 q_n(ball) + n g((2 delta + 1/n)|X|)

Both sides are permutation invariant, so the smoothing runs over type
weights only: symmetrising any smoothed p' keeps it in the ball and under
the cap.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from stein_lab.classical.kernel import apply_blur, blur_kernel, blur_m
from stein_lab.classical.symmetric import SymmetricDistribution, random_symmetric
from stein_lab.divergences.result import ClassicalDistribution, Infinity
from stein_lab.divergences.smoothing import d_max_smoothed_classical
from stein_lab.errors import ValidationError
from stein_lab.hypergeometric import bosonic_entropy
from stein_lab.verdicts import CheckRecord, inapplicable, inequality

logger = logging.getLogger(__name__)

CONCENTRATION_SLACK = 1e-12


def check_blurring_lemma(
    p_n: SymmetricDistribution,
    q_n: SymmetricDistribution,
    s: ClassicalDistribution,
    delta: float,
    eta: float,
    *,
    name: str = "classical_blurring_lemma",
) -> CheckRecord:
    if (p_n.n, p_n.alphabet_size) != (q_n.n, q_n.alphabet_size) or s.size != p_n.alphabet_size:
        raise ValidationError("p_n, q_n and s live on different type spaces", field="q_n")
    if not 0.0 < eta < 1.0:
        raise ValidationError(f"eta must lie in (0, 1), got {eta}", field="eta")
    if delta <= 0.0:
        raise ValidationError("delta must be positive", field="delta")
    started = time.perf_counter()
    n, k = p_n.n, p_n.alphabet_size

    concentration = p_n.ball_mass(s.weights, delta)
    if concentration < 1.0 - eta - CONCENTRATION_SLACK:
        return inapplicable(name, f"p_n ball mass {concentration:.6g} < 1 - eta", concentration=concentration)

    m = blur_m(n, delta)
    blurred = apply_blur(blur_kernel(n, m, k), q_n)
    lhs = d_max_smoothed_classical(p_n.weights, blurred.weights, eta)

    q_ball = q_n.ball_mass(s.weights, delta)
    spill = n * bosonic_entropy((2.0 * delta + 1.0 / n) * k)
    rhs = Infinity.POSITIVE if q_ball <= 0.0 else -math.log2(q_ball) + spill

    record = inequality(
        name,
        lhs,
        rhs,
        terms={"m": m, "q_ball_mass": q_ball, "p_ball_mass": concentration, "spill_term": spill},
        certificates=dict(lhs.certificate),
        detail=f"n={n} |X|={k} delta={delta:.6g} eta={eta:.6g}",
    )
    return record.with_runtime(time.perf_counter() - started)


@dataclass(frozen=True)
class BlurringTrial:
    """One randomised instance of the classical blurring lemma."""

    p_n: SymmetricDistribution
    q_n: SymmetricDistribution
    s: ClassicalDistribution
    delta: float
    eta: float


def sample_blurring_trial(rng: np.random.Generator, *, max_n: int = 30, max_alphabet: int = 3) -> BlurringTrial:
    """
    p_n mixes s^{⊗n} with a random symmetric distribution, and eta is read
    off its concentration; q_n is a random symmetric distribution, sometimes
    with sparse support.
    """
    k = int(rng.integers(2, max_alphabet + 1))
    n = int(rng.integers(4, max_n + 1))
    delta = float(rng.uniform(0.05, 0.3))
    s = ClassicalDistribution(rng.dirichlet(np.ones(k)))
    iid = SymmetricDistribution.iid(s, n)
    noise = random_symmetric(n, k, rng)
    a = float(rng.uniform(0.6, 1.0))
    p_n = SymmetricDistribution(n, k, a * iid.weights + (1.0 - a) * noise.weights)
    eta = min(0.95, max(1.0 - p_n.ball_mass(s.weights, delta), 1e-3))
    support = 1.0 if rng.random() < 0.7 else float(rng.uniform(0.05, 0.5))
    q_n = random_symmetric(n, k, rng, support_fraction=support)
    return BlurringTrial(p_n, q_n, s, delta, eta)


def blurring_campaign_trial(
    seed: np.random.SeedSequence,
    index: Optional[int] = None,
    *,
    max_n: int = 30,
    max_alphabet: int = 3,
) -> CheckRecord:
    trial = sample_blurring_trial(np.random.default_rng(seed), max_n=max_n, max_alphabet=max_alphabet)
    name = "classical_blurring_lemma" if index is None else f"classical_blurring_lemma[{index}]"
    return check_blurring_lemma(trial.p_n, trial.q_n, trial.s, trial.delta, trial.eta, name=name)
