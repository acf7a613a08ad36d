from .fock import build_fock_basis
from .hamiltonians import (
    build_many_body,
    build_single_particle,
    half_filling,
    hamiltonian_family,
    hopping_amplitude,
    hopping_amplitudes,
    onsite_potential,
    onsite_potentials,
    with_phase_shift,
)
from .schemas import (
    GOLDEN_ALPHA,
    Boundary,
    FluxAxis,
    FockBasis,
    ManyBodyHamiltonian,
    ModelParams,
    SingleParticleHamiltonian,
)

__all__ = [
    "GOLDEN_ALPHA",
    "Boundary",
    "FluxAxis",
    "FockBasis",
    "ManyBodyHamiltonian",
    "ModelParams",
    "SingleParticleHamiltonian",
    "build_fock_basis",
    "build_many_body",
    "build_single_particle",
    "half_filling",
    "hamiltonian_family",
    "hopping_amplitude",
    "hopping_amplitudes",
    "onsite_potential",
    "onsite_potentials",
    "with_phase_shift",
]
