"""Dense complex operator primitives."""

from stein_lab.linalg.functions import (
    PositivePartWitness,
    apply_hermitian_function,
    fidelity,
    operator_norm,
    positive_part,
    positive_part_witness,
    psd_sqrt,
    root_overlap,
    smallest_eigenvalue,
    trace_distance,
    trace_norm,
    trace_positive_part,
)
from stein_lab.linalg.operators import (
    DenseOperator,
    HermitianSpectrum,
    StateVector,
    as_matrix,
    matrix_from_json,
    matrix_to_json,
    require_hermitian,
    require_psd,
    require_state,
)
from stein_lab.linalg.tensor import (
    partial_trace,
    permutation_invariance_residual,
    permute_operator,
    purification_overlap,
    purify_symmetric,
    symmetric_projector,
    symmetrize,
    tensor,
    tensor_power,
    trace_out_last,
)

__all__ = [
    "DenseOperator",
    "HermitianSpectrum",
    "PositivePartWitness",
    "StateVector",
    "apply_hermitian_function",
    "as_matrix",
    "fidelity",
    "matrix_from_json",
    "matrix_to_json",
    "operator_norm",
    "partial_trace",
    "permutation_invariance_residual",
    "permute_operator",
    "positive_part",
    "positive_part_witness",
    "psd_sqrt",
    "purification_overlap",
    "purify_symmetric",
    "require_hermitian",
    "require_psd",
    "require_state",
    "root_overlap",
    "smallest_eigenvalue",
    "symmetric_projector",
    "symmetrize",
    "tensor",
    "tensor_power",
    "trace_distance",
    "trace_norm",
    "trace_out_last",
    "trace_positive_part",
]
