from .distributions import (
    ReferenceDistribution,
    ReferenceKind,
    ginibre_c,
    ginibre_gap_probability,
    ginibre_pdf,
    sub_wigner_norm,
)
from .entanglement import averaged_ee, entanglement_entropy, schmidt_weights
from .level_statistics import (
    distribution_distance,
    fit_sub_wigner,
    histogram_residual,
    nearest_spacings,
    normalize_spacings,
    pool_spacings,
    reference_pdf,
    spacing_histogram,
    spacing_sample,
)
from .localization import (
    averaged_fd,
    density_profile,
    fractal_dimension,
    ground_state_index,
    inverse_participation_ratio,
    select_states,
    site_density,
)
from .schemas import (
    FDReport,
    Histogram,
    Selection,
    SpacingSample,
    StateSelection,
    SubWignerFit,
)

__all__ = [
    "FDReport",
    "Histogram",
    "ReferenceDistribution",
    "ReferenceKind",
    "Selection",
    "SpacingSample",
    "StateSelection",
    "SubWignerFit",
    "averaged_ee",
    "averaged_fd",
    "density_profile",
    "distribution_distance",
    "entanglement_entropy",
    "fit_sub_wigner",
    "fractal_dimension",
    "ginibre_c",
    "ginibre_gap_probability",
    "ginibre_pdf",
    "ground_state_index",
    "histogram_residual",
    "inverse_participation_ratio",
    "nearest_spacings",
    "normalize_spacings",
    "pool_spacings",
    "reference_pdf",
    "schmidt_weights",
    "select_states",
    "spacing_histogram",
    "spacing_sample",
    "site_density",
    "sub_wigner_norm",
]
