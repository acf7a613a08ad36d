"""Stable log-determinants and determinant trajectories."""

import logging
from collections.abc import Callable

import numpy as np
import scipy.linalg

from src.exceptions import ParameterError, SingularMatrixError

logger = logging.getLogger(__name__)


def _wrap_half_open(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    wrapped = float(np.angle(np.exp(1j * angle)))
    return np.pi if wrapped <= -np.pi else wrapped


def log_det_phase(H: np.ndarray, E_B: complex = 0.0) -> tuple[float, float]:
    """(ln|det(H - E_B)|, arg det(H - E_B)) from an LU factorization.

    Args:
        H: Square matrix
        E_B: Base energy subtracted from the diagonal

    Returns:
        tuple[float, float]: log-magnitude and phase in (-pi, pi]

    Raises:
        SingularMatrixError: If a pivot is zero to working precision
    """
    matrix = np.array(H, dtype=np.complex128, copy=True)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    matrix[np.diag_indices(n)] -= E_B

    scale = float(np.linalg.norm(matrix, np.inf))
    lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
    pivots = np.diag(lu)
    magnitudes = np.abs(pivots)
    if scale == 0.0 or magnitudes.min() <= n * np.finfo(float).eps * scale:
        raise SingularMatrixError(
            f"H - E_B is singular to working precision at E_B={E_B} "
            f"(smallest pivot {magnitudes.min():.3e})"
        )

    log_abs = float(np.sum(np.log(magnitudes)))
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    unit = np.prod(pivots / magnitudes) * (-1.0 if swaps % 2 else 1.0)
    return log_abs, _wrap_half_open(float(np.angle(unit)))


def det_trajectory(
    family: Callable[[float], np.ndarray], n_theta: int, E_B: complex = 0.0
) -> np.ndarray:
    """det H(theta_k) / |det H(0)| on the grid theta_k = 2 pi k / n_theta, k = 0 .. n_theta."""
    if n_theta < 1:
        raise ParameterError(f"n_theta must be positive, got {n_theta}")
    thetas = np.linspace(0.0, 2.0 * np.pi, n_theta + 1)
    logs = np.array([log_det_phase(family(theta), E_B) for theta in thetas])
    return np.exp(logs[:, 0] - logs[0, 0] + 1j * logs[:, 1])
