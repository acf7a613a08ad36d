from .determinants import det_trajectory, log_det_phase
from .eigensolver import complex_fraction, eig, match_spectra, max_imag
from .schemas import Spectrum, WindingResult
from .winding import (
    flux_sensitivity,
    headline_winding,
    median_spacing,
    select_base_energies,
    winding_number,
    winding_with_retry,
)

__all__ = [
    "Spectrum",
    "WindingResult",
    "complex_fraction",
    "det_trajectory",
    "eig",
    "flux_sensitivity",
    "headline_winding",
    "log_det_phase",
    "match_spectra",
    "max_imag",
    "median_spacing",
    "select_base_energies",
    "winding_number",
    "winding_with_retry",
]
