"""
One-shot and asymptotic divergences, classical and quantum, and their
minimisation over convex hulls of states.
"""

from stein_lab.divergences.hull import Hull, d_max_to_hull, dtilde_to_hull, rel_ent_to_hull
from stein_lab.divergences.hull_classical import (
    d_H_to_hull_classical,
    d_max_smoothed_to_hull_classical,
    d_max_to_hull_classical,
    dtilde_to_hull_classical,
    generator_matrix,
    rel_ent_to_hull_classical,
)
from stein_lab.divergences.hypothesis import d_H, d_H_classical, hypothesis_dual
from stein_lab.divergences.relative import d_max, d_max_classical, relative_entropy_classical, umegaki
from stein_lab.divergences.result import (
    ClassicalDistribution,
    DivergenceResult,
    Infinity,
    as_float,
    is_infinite,
    value_to_json,
)
from stein_lab.divergences.smoothing import d_max_smoothed_classical, dtilde_max, dtilde_max_classical

__all__ = [
    "ClassicalDistribution",
    "DivergenceResult",
    "Hull",
    "Infinity",
    "as_float",
    "d_H",
    "d_H_classical",
    "d_H_to_hull_classical",
    "d_max",
    "d_max_classical",
    "d_max_smoothed_classical",
    "d_max_smoothed_to_hull_classical",
    "d_max_to_hull",
    "d_max_to_hull_classical",
    "dtilde_max",
    "dtilde_max_classical",
    "dtilde_to_hull",
    "dtilde_to_hull_classical",
    "generator_matrix",
    "hypothesis_dual",
    "is_infinite",
    "rel_ent_to_hull",
    "rel_ent_to_hull_classical",
    "relative_entropy_classical",
    "umegaki",
    "value_to_json",
]
