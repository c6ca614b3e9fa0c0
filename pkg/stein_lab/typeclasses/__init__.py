"""Types, type classes and multinomial counts."""

from stein_lab.typeclasses.vectors import (
    TypeVector,
    ball_mask,
    count_matrix,
    enumerate_types,
    in_type_ball,
    infinity_distance,
    leq_elementwise,
    multinomial,
    multinomial_by_binomials,
    type_ball,
    type_count,
    type_index,
    type_of_sequence,
)

__all__ = [
    "TypeVector",
    "ball_mask",
    "count_matrix",
    "enumerate_types",
    "in_type_ball",
    "infinity_distance",
    "leq_elementwise",
    "multinomial",
    "multinomial_by_binomials",
    "type_ball",
    "type_count",
    "type_index",
    "type_of_sequence",
]
