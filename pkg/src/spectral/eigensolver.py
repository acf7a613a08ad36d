"""Dense non-Hermitian diagonalization and spectrum summaries."""

import logging

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from src.config import settings
from src.exceptions import EigensolverError, ParameterError
from src.lattice.fock import check_dense_budget

from .schemas import Spectrum

logger = logging.getLogger(__name__)


def eig(H: np.ndarray, params=None, vectors: bool = True) -> Spectrum:
    """Diagonalize a dense matrix with the general nonsymmetric LAPACK driver.

    Real matrices go through the real driver so that real eigenvalues come
    back with exactly zero imaginary part and complex ones in exact conjugate
    pairs. Exactly Hermitian input uses the Hermitian driver.

    Args:
        H: Square matrix with finite entries
        params: Parameter record attached to convergence errors
        vectors: Whether to keep the right eigenvectors

    Returns:
        Spectrum: Sorted eigenvalues, normalized right vectors and the residual

    Raises:
        ParameterError: If the matrix is not square or has non-finite entries
        EigensolverError: If LAPACK does not converge
    """
    matrix = np.asarray(H)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ParameterError("matrix has non-finite entries")
    check_dense_budget(matrix.shape[0])

    if np.iscomplexobj(matrix) and not np.any(matrix.imag):
        matrix = matrix.real
    hermitian = np.array_equal(matrix, matrix.conj().T)

    try:
        if hermitian:
            values, right = scipy.linalg.eigh(matrix, check_finite=False)
        else:
            values, right = scipy.linalg.eig(matrix, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as e:
        logger.error("Eigensolver failed for %dx%d matrix: %s", *matrix.shape, e)
        raise EigensolverError(f"dense eigensolver did not converge: {e}", params) from e

    values = values.astype(np.complex128)
    right = right.astype(np.complex128)
    right /= np.linalg.norm(right, axis=0)

    order = np.lexsort((values.imag, values.real))
    values = values[order]
    right = right[:, order]

    residual = float(np.max(np.abs(matrix @ right - right * values))) if values.size else 0.0
    norm = float(np.linalg.norm(matrix, np.inf))
    degraded = residual >= settings.RESIDUAL_TOLERANCE * max(norm, np.finfo(float).tiny)
    if degraded:
        logger.warning(
            "Degraded spectrum: residual %.3e vs norm %.3e (params: %s)",
            residual,
            norm,
            params,
        )

    return Spectrum(
        eigenvalues=values,
        right_vectors=right if vectors else None,
        residual=residual,
        matrix_norm=norm,
        degraded=degraded,
    )


def complex_fraction(s: Spectrum, cutoff: float | None = None) -> float:
    """f_Im: share of eigenvalues with |Im E| above the cutoff."""
    if s.dim == 0:
        raise ParameterError("empty spectrum")
    cutoff = settings.IMAG_CUTOFF if cutoff is None else cutoff
    return float(np.count_nonzero(np.abs(s.eigenvalues.imag) > cutoff) / s.dim)


def max_imag(s: Spectrum) -> float:
    """epsilon: largest |Im E| in the spectrum."""
    if s.dim == 0:
        raise ParameterError("empty spectrum")
    return float(np.max(np.abs(s.eigenvalues.imag)))


def match_spectra(a: np.ndarray, b: np.ndarray) -> float:
    """Largest pairwise distance under the optimal one-to-one matching of two spectra."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.size != b.size:
        raise ParameterError(f"spectra differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
