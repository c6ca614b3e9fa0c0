"""Symmetric-subspace blurring: type basis, Kraus decomposition, norm bounds and the inequality chain."""

from stein_lab.quantum.blurring import (
    appended_copies,
    blur_k,
    blur_q,
    blur_q_average,
    blur_q_dense,
    blur_rho,
    blur_rho_average,
    blur_rho_k,
    blurring_average_weights,
    check_delta,
    gamma_dense,
    mixing_weights,
)
from stein_lab.quantum.chain import (
    BlurringProxy,
    blurring_lemma_proxy,
    blurring_proxy_trend,
    check_asymptotic_continuity,
    check_dmax_elementary,
    check_gqsl_chain,
    near_vacuum_product,
    perturbed_symmetric_state,
)
from stein_lab.quantum.decomposition import (
    KrausFamily,
    d_r_bound,
    d_r_diag,
    gamma,
    kraus_contractions,
    kraus_family,
    sandwich_d_r,
    theta,
    theta_completeness_residual,
)
from stein_lab.quantum.norms import (
    check_d_r_bound,
    check_output_norm,
    check_tail_filtering,
    d_r_bound_sweep,
    low_block_mask,
    max_excitation,
    output_norm_factor,
    random_deficient_operator,
    random_tail_filtering_instance,
)
from stein_lab.quantum.symmetric import (
    Contraction,
    SymTypeOperator,
    partial_trace_contractions,
    sym_basis_matrix,
    sym_basis_vector,
    sym_overlap,
    sym_partial_trace,
)

__all__ = [
    "BlurringProxy",
    "Contraction",
    "KrausFamily",
    "SymTypeOperator",
    "appended_copies",
    "blur_k",
    "blur_q",
    "blur_q_average",
    "blur_q_dense",
    "blur_rho",
    "blur_rho_average",
    "blur_rho_k",
    "blurring_average_weights",
    "blurring_lemma_proxy",
    "blurring_proxy_trend",
    "check_asymptotic_continuity",
    "check_d_r_bound",
    "check_delta",
    "check_dmax_elementary",
    "check_gqsl_chain",
    "check_output_norm",
    "check_tail_filtering",
    "d_r_bound",
    "d_r_bound_sweep",
    "d_r_diag",
    "gamma",
    "gamma_dense",
    "kraus_contractions",
    "kraus_family",
    "low_block_mask",
    "max_excitation",
    "mixing_weights",
    "near_vacuum_product",
    "output_norm_factor",
    "partial_trace_contractions",
    "perturbed_symmetric_state",
    "random_deficient_operator",
    "random_tail_filtering_instance",
    "sandwich_d_r",
    "sym_basis_matrix",
    "sym_basis_vector",
    "sym_overlap",
    "sym_partial_trace",
    "theta",
    "theta_completeness_residual",
]
