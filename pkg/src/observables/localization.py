"""Inverse participation ratios, fractal dimensions and density profiles."""

import logging

import numpy as np

from src.exceptions import ParameterError
from src.lattice import FockBasis
from src.spectral import Spectrum

from .schemas import FDReport, Selection, StateSelection

logger = logging.getLogger(__name__)


def _probabilities(state: np.ndarray) -> np.ndarray:
    weights = np.abs(np.asarray(state, dtype=np.complex128).ravel()) ** 2
    total = weights.sum()
    if total == 0.0:
        raise ParameterError("zero state vector")
    return weights / total


def inverse_participation_ratio(state: np.ndarray) -> float:
    """sum_j |psi_j|^4 of the normalized state."""
    return float(np.sum(_probabilities(state) ** 2))


def fractal_dimension(state: np.ndarray, D: int | None = None) -> float:
    """eta = -ln(IPR) / ln D.

    Args:
        state: Eigenvector amplitudes
        D: Hilbert-space dimension, the vector length by default

    Returns:
        float: 0 for a single-site state, 1 for a uniform one
    """
    dim = np.asarray(state).size if D is None else D
    if dim < 2:
        raise ParameterError(f"fractal dimension needs D >= 2, got {dim}")
    return float(-np.log(inverse_participation_ratio(state)) / np.log(dim))


def density_profile(state: np.ndarray) -> np.ndarray:
    """|psi(j)|^2 per site, summing to 1."""
    return _probabilities(state)


def site_density(state: np.ndarray, basis: FockBasis) -> np.ndarray:
    """<n_j> of a many-body state, summing to N."""
    return _probabilities(state) @ basis.occupations().astype(float)


def ground_state_index(s: Spectrum) -> int:
    """Index of the state with the smallest real part (ties by imaginary part)."""
    energies = s.eigenvalues
    return int(np.lexsort((energies.imag, energies.real))[0])


def _selection_count(dim: int, selection: Selection, count: int | None) -> tuple[int, int]:
    if count is not None:
        requested = count
    elif selection == Selection.MID_SIXTH_REAL:
        requested = dim // 6
    elif selection == Selection.CENTER_TENTH_COMPLEX:
        requested = dim // 10
    else:
        requested = dim
    return requested, min(max(requested, 0), dim) or dim


def select_states(
    s: Spectrum, selection: Selection | str, count: int | None = None
) -> StateSelection:
    """Pick the eigenstates an average runs over.

    mid_sixth_real keeps the D/6 states whose Re E is closest to the median
    Re E; center_tenth_complex keeps the D/10 states nearest the spectrum
    centroid. Requests of zero states or more than D fall back to all D.
    """
    selection = Selection(selection)
    dim = s.dim
    if dim == 0:
        raise ParameterError("empty spectrum")
    requested, chosen = _selection_count(dim, selection, count)
    clamped = chosen != requested
    if clamped:
        logger.warning(
            "Selection %s asked for %d of %d states; using %d", selection, requested, dim, chosen
        )

    energies = s.eigenvalues
    match selection:
        case Selection.ALL:
            distance = np.zeros(dim)
        case Selection.MID_SIXTH_REAL:
            distance = np.abs(energies.real - np.median(energies.real))
        case Selection.CENTER_TENTH_COMPLEX:
            distance = np.abs(energies - energies.mean())
    order = np.argsort(distance, kind="stable")[:chosen]
    return StateSelection(
        selection=selection,
        indices=sorted(int(i) for i in order),
        requested=requested,
        clamped=clamped,
    )


def averaged_fd(
    s: Spectrum, selection: Selection | str = Selection.ALL, count: int | None = None
) -> FDReport:
    """Mean fractal dimension over a selection of right eigenvectors."""
    if s.right_vectors is None:
        raise ParameterError("fractal dimensions need eigenvectors")
    chosen = select_states(s, selection, count)
    dim = s.right_vectors.shape[0]
    per_state = [fractal_dimension(s.right_vectors[:, n], dim) for n in chosen.indices]
    return FDReport(
        per_state=per_state,
        averaged=float(np.mean(per_state)),
        selection=chosen.selection,
        indices=chosen.indices,
    )
