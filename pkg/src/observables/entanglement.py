"""Bipartite entanglement entropy of fixed-N many-body eigenstates."""

import logging

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed
from scipy.special import entr

from src.exceptions import ParameterError
from src.lattice import FockBasis
from src.spectral import Spectrum

from .localization import select_states
from .schemas import Selection

logger = logging.getLogger(__name__)


def schmidt_weights(state: np.ndarray, basis: FockBasis, cut: int | None = None) -> np.ndarray:
    """Squared Schmidt values for the split of sites [0, cut) | [cut, L).

    The left block holds the low `cut` bits of each Fock word. Coefficients
    are arranged sector by sector in the left particle number, where the
    reduced density matrix is block diagonal.
    """
    cut = basis.L // 2 if cut is None else cut
    if not 0 < cut < basis.L:
        raise ParameterError(f"cut must lie in (0, {basis.L}), got {cut}")
    amplitudes = np.asarray(state, dtype=np.complex128).ravel()
    if amplitudes.size != basis.dim:
        raise ParameterError(f"state has {amplitudes.size} entries, basis has {basis.dim}")
    norm = np.linalg.norm(amplitudes)
    if norm == 0.0:
        raise ParameterError("zero state vector")
    amplitudes = amplitudes / norm

    left = basis.states & ((1 << cut) - 1)
    right = basis.states >> cut
    sectors = np.bitwise_count(left)

    weights = []
    for n_left in np.unique(sectors):
        mask = sectors == n_left
        rows_words, rows = np.unique(left[mask], return_inverse=True)
        cols_words, cols = np.unique(right[mask], return_inverse=True)
        block = np.zeros((rows_words.size, cols_words.size), dtype=np.complex128)
        block[rows, cols] = amplitudes[mask]
        weights.append(scipy.linalg.svdvals(block) ** 2)
    return np.concatenate(weights)


def entanglement_entropy(state: np.ndarray, basis: FockBasis, cut: int | None = None) -> float:
    """S = -sum p ln p over the Schmidt weights, with 0 ln 0 = 0."""
    return float(np.sum(entr(schmidt_weights(state, basis, cut))))


def averaged_ee(
    s: Spectrum,
    basis: FockBasis,
    fraction: float = 0.1,
    cut: int | None = None,
    n_jobs: int = 1,
) -> float:
    """Half-chain entropy per site averaged over the states nearest the centroid.

    Args:
        s: Many-body spectrum with eigenvectors
        basis: Fock basis the eigenvectors are expressed in
        fraction: Share of states kept around the complex-plane centroid
        cut: Bipartition site, L // 2 by default
        n_jobs: joblib workers; results are gathered in state order

    Returns:
        float: mean S / L
    """
    if s.right_vectors is None:
        raise ParameterError("entanglement entropies need eigenvectors")
    if not 0.0 < fraction <= 1.0:
        raise ParameterError(f"fraction must lie in (0, 1], got {fraction}")
    count = int(np.floor(s.dim * fraction + 1e-9))
    chosen = select_states(s, Selection.CENTER_TENTH_COMPLEX, count)
    entropies = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(entanglement_entropy)(s.right_vectors[:, n], basis, cut) for n in chosen.indices
    )
    logger.debug("Averaged EE over %d of %d states", len(entropies), s.dim)
    return float(np.mean(entropies) / basis.L)
