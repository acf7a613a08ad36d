"""Tests for lattice parameters, Fock bases and Hamiltonian builders."""

import math

import numpy as np
import pytest

from src.config import settings
from src.exceptions import BasisTooLargeError, ParameterError
from src.lattice import (
    Boundary,
    FluxAxis,
    ModelParams,
    build_fock_basis,
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
from src.spectral import eig, match_spectra


def test_uniform_ring_spectrum() -> None:
    """Three-site clean ring has eigenvalues {2t, -t, -t}."""
    p = ModelParams(L=3)
    spectrum = eig(build_single_particle(p).matrix)
    assert np.allclose(spectrum.eigenvalues.real, [-1.0, -1.0, 2.0], atol=1e-12)
    assert np.max(np.abs(spectrum.eigenvalues.imag)) < 1e-13


def test_nonreciprocal_hop_ratio() -> None:
    """Backward and forward hops on each bond differ by e^{2g}."""
    p = ModelParams(L=610, g=0.5, V2=0.5)
    matrix = build_single_particle(p).matrix
    for j in (0, 17, 300, 608):
        ratio = abs(matrix[j, j + 1]) / abs(matrix[j + 1, j])
        assert ratio == pytest.approx(math.e, rel=1e-12)


def test_scalar_and_vector_forms_agree() -> None:
    p = ModelParams(L=34, V1=1.3, V2=0.7, h=0.4, theta_h=1.1, phi=0.3)
    t_j = hopping_amplitudes(p)
    delta_j = onsite_potentials(p)
    for j in range(p.L):
        assert hopping_amplitude(j, p) == pytest.approx(t_j[j], abs=1e-14)
        assert onsite_potential(j, p) == pytest.approx(delta_j[j], abs=1e-14)
    with pytest.raises(ParameterError):
        hopping_amplitude(p.L, p)


def test_periodic_seam_uses_last_hopping() -> None:
    p = ModelParams(L=8, V2=0.6, g=0.2)
    matrix = build_single_particle(p).matrix
    t_last = hopping_amplitude(p.L - 1, p)
    assert matrix[0, p.L - 1] == pytest.approx(t_last * math.exp(-0.2))
    assert matrix[p.L - 1, 0] == pytest.approx(t_last * math.exp(0.2))


def test_open_boundary_gauge_invariance() -> None:
    """Under open boundaries the spectrum does not depend on g."""
    base = {"L": 100, "V1": 1.5, "V2": 0.5, "boundary": Boundary.OPEN}
    with_g = eig(build_single_particle(ModelParams(**base, g=0.1)).matrix, vectors=False)
    without_g = eig(build_single_particle(ModelParams(**base)).matrix, vectors=False)
    assert match_spectra(with_g.eigenvalues, without_g.eigenvalues) < 1e-8


def test_phase_shift_changes_spectrum() -> None:
    p = ModelParams(L=8, V1=1.0, V2=0.3)
    a = eig(build_single_particle(with_phase_shift(p, 0.4)).matrix, vectors=False)
    b = eig(build_single_particle(with_phase_shift(p, 2.1)).matrix, vectors=False)
    assert match_spectra(a.eigenvalues, b.eigenvalues) > 1e-6


def test_params_validation() -> None:
    with pytest.raises(ValueError):
        ModelParams(L=2)
    ModelParams(L=2, boundary=Boundary.OPEN)
    with pytest.raises(ValueError):
        ModelParams(L=4, N=5)
    with pytest.raises(ValueError):
        ModelParams(L=4, V1=-1.0)
    with pytest.raises(ValueError):
        ModelParams(L=4, g=float("nan"))
    with pytest.raises(ValueError):
        ModelParams(L=4, unknown=1.0)


def test_canonical_hash() -> None:
    p = ModelParams(L=10, V1=2.0, g=0.5)
    same = ModelParams.model_validate_json(p.canonical_json())
    assert same.canonical_hash() == p.canonical_hash()
    assert with_phase_shift(p, 0.1).canonical_hash() != p.canonical_hash()


def test_fock_basis_order() -> None:
    basis = build_fock_basis(4, 2)
    assert basis.states.tolist() == [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
    assert basis.index(0b1001) == 3
    with pytest.raises(KeyError):
        basis.index(0b0111)
    assert basis.occupations().sum(axis=1).tolist() == [2] * 6


def test_fock_basis_dimensions() -> None:
    assert build_fock_basis(14, 7).dim == 3432
    vacuum = build_fock_basis(2, 0)
    assert vacuum.dim == 1
    assert vacuum.states.tolist() == [0]


def test_fock_basis_limits(monkeypatch: pytest.MonkeyPatch) -> None:
    with pytest.raises(ParameterError):
        build_fock_basis(4, 5)
    with pytest.raises(ParameterError):
        build_fock_basis(settings.MAX_MANY_BODY_SITES + 1, 1)
    monkeypatch.setattr(settings, "MEMORY_BUDGET_MB", 0.1)
    with pytest.raises(BasisTooLargeError):
        build_fock_basis(10, 5)


def test_interaction_diagonal() -> None:
    """U counts adjacent occupied pairs, including the periodic wrap."""
    p = ModelParams(L=4, N=2, U=2.0)
    hamiltonian = build_many_body(p)
    basis = hamiltonian.basis
    diagonal = np.diag(hamiltonian.matrix).real
    assert diagonal[basis.index(0b0011)] == 2.0
    assert diagonal[basis.index(0b1001)] == 2.0
    assert diagonal[basis.index(0b0101)] == 0.0


def test_seam_fermion_sign() -> None:
    """Hopping across the periodic seam with N=2 picks up a minus sign."""
    p = ModelParams(L=4, N=2)
    hamiltonian = build_many_body(p)
    basis = hamiltonian.basis
    assert hamiltonian.matrix[basis.index(0b0011), basis.index(0b1010)] == pytest.approx(-1.0)
    assert hamiltonian.matrix[basis.index(0b0110), basis.index(0b0101)] == pytest.approx(1.0)


def test_single_particle_sector_matches_single_particle_chain() -> None:
    p = ModelParams(L=8, N=1, g=0.3, h=0.2, V1=1.2, V2=0.4, U=2.0, phi=0.7)
    many_body = build_many_body(p).matrix
    single = build_single_particle(p).matrix
    assert np.allclose(many_body, single, atol=1e-14)


def test_basis_mismatch() -> None:
    with pytest.raises(ParameterError):
        build_many_body(ModelParams(L=6, N=3), build_fock_basis(6, 2))
    with pytest.raises(ParameterError):
        build_many_body(ModelParams(L=6))


def test_hamiltonian_family() -> None:
    p = ModelParams(L=12, V1=1.0, g=0.3)
    family = hamiltonian_family(p, FluxAxis.G)
    assert np.allclose(family(0.0), build_single_particle(p).matrix)
    twisted = ModelParams(L=12, V1=1.0, g=0.3, theta_g=1.5)
    assert np.allclose(family(1.5), build_single_particle(twisted).matrix)

    many_body = hamiltonian_family(half_filling(ModelParams(L=6, U=1.0)), FluxAxis.H)
    assert many_body(0.3).shape == (20, 20)


def test_half_filling() -> None:
    assert half_filling(ModelParams(L=10)).N == 5
    assert half_filling(ModelParams(L=9)).N == 4


def test_hermitian_limit_is_hermitian() -> None:
    """g = h = 0 and theta_g = 0 give H = H^dagger entry by entry."""
    p = ModelParams(L=55, V1=1.3, V2=0.7, theta_h=0.9, phi=2.3)
    matrix = build_single_particle(p).matrix
    assert np.max(np.abs(matrix - matrix.conj().T)) < 1e-14 * np.max(np.abs(matrix))

    many_body = build_many_body(ModelParams(L=8, N=4, V1=1.3, V2=0.7, U=2.0, phi=2.3)).matrix
    assert np.max(np.abs(many_body - many_body.conj().T)) < 1e-14 * np.max(np.abs(many_body))


def test_reciprocal_hopping_gives_symmetric_matrix() -> None:
    """With g = 0 and theta_g = 0 a complex potential keeps H equal to its transpose."""
    for h in (0.0, 0.5, 1.7):
        matrix = build_single_particle(ModelParams(L=34, V1=1.1, V2=0.4, h=h, theta_h=0.6)).matrix
        assert np.array_equal(matrix, matrix.T)


def test_flux_periodicity() -> None:
    p = ModelParams(L=21, V1=1.2, V2=0.5, g=0.4, h=0.3)
    start = eig(build_single_particle(p).matrix, vectors=False)
    full_turn = eig(
        build_single_particle(p.model_copy(update={"theta_g": 2 * math.pi})).matrix, vectors=False
    )
    assert match_spectra(start.eigenvalues, full_turn.eigenvalues) < 1e-10


def test_full_phase_shift_is_identity() -> None:
    p = ModelParams(L=21, V1=1.2, V2=0.5, g=0.4, h=0.3)
    shifted = build_single_particle(with_phase_shift(p, 2 * math.pi)).matrix
    unshifted = build_single_particle(with_phase_shift(p, 0.0)).matrix
    assert np.allclose(shifted, unshifted, rtol=0.0, atol=1e-13)
    assert (
        match_spectra(eig(shifted, vectors=False).eigenvalues, eig(unshifted, vectors=False).eigenvalues)
        < 1e-10
    )


def test_many_body_trace() -> None:
    """tr H sums the on-site and nearest-neighbour interaction energies of every Fock state."""
    p = ModelParams(L=6, N=3, V1=1.4, V2=0.5, g=0.3, h=0.4, U=1.5, phi=0.8)
    hamiltonian = build_many_body(p)
    potentials = onsite_potentials(p)
    expected = 0j
    for state in hamiltonian.basis.states.tolist():
        occupied = [(state >> j) & 1 for j in range(p.L)]
        expected += sum(potentials[j] * occupied[j] for j in range(p.L))
        expected += p.U * sum(occupied[j] * occupied[(j + 1) % p.L] for j in range(p.L))
    assert np.trace(hamiltonian.matrix) == pytest.approx(expected, rel=1e-12)
