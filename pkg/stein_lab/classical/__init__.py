"""Classical blurring on type space and the one-shot classical Stein checks."""

from stein_lab.classical.kernel import (
    BlurKernel,
    apply_blur,
    blur_kernel,
    blur_kernel_exact,
    blur_m,
    blur_sequences_exact,
    spill_bound,
)
from stein_lab.classical.lemma import (
    BlurringTrial,
    blurring_campaign_trial,
    check_blurring_lemma,
    sample_blurring_trial,
)
from stein_lab.classical.stein import (
    SteinEstimate,
    check_classical_gsl,
    gsl_campaign_trial,
    gsl_terms,
    sample_product_family,
    stein_estimate,
    symmetrized_product_generators,
    type_space_generators,
)
from stein_lab.classical.symmetric import (
    SymmetricDistribution,
    iid_type_masses,
    random_symmetric,
    total_variation,
)
from stein_lab.classical.typicality import sanov_pinsker_bound, typical_radius, typicality_mass

__all__ = [
    "BlurKernel",
    "BlurringTrial",
    "SteinEstimate",
    "SymmetricDistribution",
    "apply_blur",
    "blur_kernel",
    "blur_kernel_exact",
    "blur_m",
    "blur_sequences_exact",
    "blurring_campaign_trial",
    "check_blurring_lemma",
    "check_classical_gsl",
    "gsl_campaign_trial",
    "gsl_terms",
    "iid_type_masses",
    "random_symmetric",
    "sample_blurring_trial",
    "sample_product_family",
    "sanov_pinsker_bound",
    "spill_bound",
    "stein_estimate",
    "symmetrized_product_generators",
    "total_variation",
    "type_space_generators",
    "typical_radius",
    "typicality_mass",
]
