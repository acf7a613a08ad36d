"""Fixed-particle-number Fock bases encoded as integer bit words."""

import logging
import math
from itertools import combinations

import numpy as np

from src.config import settings
from src.exceptions import BasisTooLargeError, ParameterError

from .schemas import FockBasis

logger = logging.getLogger(__name__)

COMPLEX_BYTES = np.dtype(np.complex128).itemsize


def dense_matrix_bytes(dim: int) -> int:
    return dim * dim * COMPLEX_BYTES


def check_dense_budget(dim: int) -> None:
    """Reject dimensions whose dense complex matrix exceeds the memory budget."""
    budget = settings.MEMORY_BUDGET_MB * 1024**2
    needed = dense_matrix_bytes(dim)
    if needed > budget:
        raise BasisTooLargeError(
            f"dense {dim}x{dim} complex matrix needs {needed / 1024**2:.1f} MB, "
            f"budget is {settings.MEMORY_BUDGET_MB:.1f} MB"
        )


def build_fock_basis(L: int, N: int) -> FockBasis:
    """Enumerate all L-site words with exactly N set bits in ascending order.

    Args:
        L: Number of lattice sites
        N: Number of particles

    Returns:
        FockBasis: Basis of dimension binomial(L, N)

    Raises:
        ParameterError: If N is outside [0, L] or L exceeds the dense cap
        BasisTooLargeError: If the dense Hamiltonian would not fit the budget
    """
    if L < 1 or not 0 <= N <= L:
        raise ParameterError(f"need 0 <= N <= L with L >= 1, got L={L}, N={N}")
    if L > settings.MAX_MANY_BODY_SITES:
        raise ParameterError(
            f"L={L} exceeds the dense many-body cap of {settings.MAX_MANY_BODY_SITES} sites"
        )

    dim = math.comb(L, N)
    check_dense_budget(dim)

    words = np.fromiter(
        (sum(1 << site for site in occupied) for occupied in combinations(range(L), N)),
        dtype=np.int64,
        count=dim,
    )
    words.sort()
    logger.debug("Fock basis L=%d N=%d has dimension %d", L, N, dim)
    return FockBasis(L=L, N=N, states=words)
