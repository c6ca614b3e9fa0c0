"""Free-set families as level-indexed convex hulls of generator lists."""

from stein_lab.free_sets.axioms import AxiomCheck, AxiomReport, check_axioms
from stein_lab.free_sets.builders import (
    BROKEN_AXIOMS,
    build_broken_family,
    build_explicit_family,
    build_product_family,
    build_sep_family,
    deduplicate,
    universal_bound,
)
from stein_lab.free_sets.family import ConstructionRule, FreeFamily, full_rank_constant
from stein_lab.free_sets.membership import HullDistance, hull_distance, project_to_simplex

__all__ = [
    "BROKEN_AXIOMS",
    "AxiomCheck",
    "AxiomReport",
    "ConstructionRule",
    "FreeFamily",
    "HullDistance",
    "build_broken_family",
    "build_explicit_family",
    "build_product_family",
    "build_sep_family",
    "check_axioms",
    "deduplicate",
    "full_rank_constant",
    "hull_distance",
    "project_to_simplex",
    "universal_bound",
]
