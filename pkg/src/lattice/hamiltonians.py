"""Hamiltonian construction for the non-Hermitian generalized AAH model.

Sites are indexed j = 0 .. L-1. The hop c^dag_{j+1} c_j carries
t_j exp(-g + i theta_g / L) and its partner c^dag_j c_{j+1} carries
t_j exp(g - i theta_g / L). The sample phase phi shifts both cosine
arguments undivided by L.
"""

import logging
from collections.abc import Callable

import numpy as np

from src.exceptions import ParameterError

from .fock import build_fock_basis, check_dense_budget
from .schemas import (
    Boundary,
    FluxAxis,
    FockBasis,
    ManyBodyHamiltonian,
    ModelParams,
    SingleParticleHamiltonian,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def _phase_offset(p: ModelParams) -> float:
    return p.theta_h / p.L + p.phi


def hopping_amplitude(j: int, p: ModelParams) -> float:
    """t_j = t + V2 cos[2 pi (j + 1/2) alpha + theta_h / L + phi]."""
    if not 0 <= j < p.L:
        raise ParameterError(f"site index {j} outside [0, {p.L})")
    return float(p.t + p.V2 * np.cos(TWO_PI * (j + 0.5) * p.alpha + _phase_offset(p)))


def onsite_potential(j: int, p: ModelParams) -> complex:
    """Delta_j = V1 cos(2 pi j alpha + theta_h / L + phi + i h)."""
    if not 0 <= j < p.L:
        raise ParameterError(f"site index {j} outside [0, {p.L})")
    argument = TWO_PI * j * p.alpha + _phase_offset(p) + 1j * p.h
    return complex(p.V1 * np.cos(argument))


def hopping_amplitudes(p: ModelParams) -> np.ndarray:
    sites = np.arange(p.L, dtype=float)
    return p.t + p.V2 * np.cos(TWO_PI * (sites + 0.5) * p.alpha + _phase_offset(p))


def onsite_potentials(p: ModelParams) -> np.ndarray:
    sites = np.arange(p.L, dtype=float)
    return p.V1 * np.cos(TWO_PI * sites * p.alpha + _phase_offset(p) + 1j * p.h)


def hop_factors(p: ModelParams) -> tuple[complex, complex]:
    """(forward, backward) prefactors of c^dag_{j+1} c_j and c^dag_j c_{j+1}."""
    twist = p.theta_g / p.L
    forward = complex(np.exp(-p.g + 1j * twist))
    backward = complex(np.exp(p.g - 1j * twist))
    return forward, backward


def _bonds(p: ModelParams) -> list[tuple[int, int]]:
    bonds = [(j, j + 1) for j in range(p.L - 1)]
    if p.boundary == Boundary.PERIODIC:
        bonds.append((p.L - 1, 0))
    return bonds


def build_single_particle(p: ModelParams) -> SingleParticleHamiltonian:
    """Dense L x L single-particle Hamiltonian.

    Args:
        p: Model parameters (N is ignored)

    Returns:
        SingleParticleHamiltonian: Matrix with hops on (j, j+1) couples and Delta_j on the diagonal
    """
    t_j = hopping_amplitudes(p)
    forward, backward = hop_factors(p)

    matrix = np.zeros((p.L, p.L), dtype=np.complex128)
    matrix[np.diag_indices(p.L)] = onsite_potentials(p)
    for j, k in _bonds(p):
        matrix[k, j] += t_j[j] * forward
        matrix[j, k] += t_j[j] * backward

    matrix.setflags(write=False)
    return SingleParticleHamiltonian(params=p, matrix=matrix)


def _check_basis(p: ModelParams, basis: FockBasis) -> None:
    if basis.L != p.L or (p.N is not None and basis.N != p.N):
        raise ParameterError(
            f"basis (L={basis.L}, N={basis.N}) does not match params (L={p.L}, N={p.N})"
        )


def build_many_body(p: ModelParams, basis: FockBasis | None = None) -> ManyBodyHamiltonian:
    """Dense many-body Hamiltonian in a fixed-N Fock basis.

    The seam hop of a periodic chain moves a fermion past the other N-1
    particles and therefore carries the sign (-1)^(N-1).

    Args:
        p: Model parameters; N is taken from the basis when p.N is None
        basis: Fock basis; built from (p.L, p.N) when omitted

    Returns:
        ManyBodyHamiltonian: D x D matrix with D = binomial(L, N)
    """
    if basis is None:
        if p.N is None:
            raise ParameterError("many-body construction needs a particle number N")
        basis = build_fock_basis(p.L, p.N)
    _check_basis(p, basis)
    check_dense_budget(basis.dim)

    states = basis.states
    occupations = basis.occupations().astype(float)
    t_j = hopping_amplitudes(p)
    forward, backward = hop_factors(p)

    neighbours = occupations[:, :-1] * occupations[:, 1:]
    interaction = neighbours.sum(axis=1)
    if p.boundary == Boundary.PERIODIC:
        interaction += occupations[:, -1] * occupations[:, 0]
    diagonal = occupations @ onsite_potentials(p) + p.U * interaction

    matrix = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    matrix[np.diag_indices(basis.dim)] = diagonal

    seam_sign = -1.0 if basis.N % 2 == 0 else 1.0
    for j, k in _bonds(p):
        sign = seam_sign if k < j else 1.0
        pair = (1 << j) | (1 << k)
        occupied_j = ((states >> j) & 1).astype(bool)
        occupied_k = ((states >> k) & 1).astype(bool)

        # c^dag_k c_j
        movers = occupied_j & ~occupied_k
        cols = np.flatnonzero(movers)
        rows = basis.indices(states[movers] ^ pair)
        np.add.at(matrix, (rows, cols), sign * t_j[j] * forward)

        # c^dag_j c_k
        movers = occupied_k & ~occupied_j
        cols = np.flatnonzero(movers)
        rows = basis.indices(states[movers] ^ pair)
        np.add.at(matrix, (rows, cols), sign * t_j[j] * backward)

    matrix.setflags(write=False)
    return ManyBodyHamiltonian(params=p, basis=basis, matrix=matrix)


def with_phase_shift(p: ModelParams, phi: float) -> ModelParams:
    """Copy of the params with the sample phase shift set to phi."""
    return ModelParams.model_validate({**p.model_dump(), "phi": phi})


def half_filling(p: ModelParams) -> ModelParams:
    return ModelParams.model_validate({**p.model_dump(), "N": p.L // 2})


def hamiltonian_family(
    p: ModelParams, nu: FluxAxis, basis: FockBasis | None = None
) -> Callable[[float], np.ndarray]:
    """theta -> H(theta_nu) with every other parameter fixed.

    The single-particle matrix is returned when neither basis nor p.N is set.
    """
    field = "theta_g" if FluxAxis(nu) == FluxAxis.G else "theta_h"
    many_body = basis is not None or p.N is not None
    if many_body and basis is None:
        basis = build_fock_basis(p.L, p.N)  # type: ignore[arg-type]

    def family(theta: float) -> np.ndarray:
        shifted = p.model_copy(update={field: float(theta)})
        if many_body:
            return build_many_body(shifted, basis).matrix
        return build_single_particle(shifted).matrix

    return family
