import math

import numpy as np
import pytest
from pydantic import ValidationError

from coupling.levels import LevelIndex
from errors import DimensionGuardError, DomainError
from oracle.hamiltonian import EDConfig, ProductBasisHamiltonian, ed_spectrum, overlap4, overlap_tensor
from oracle.relative_motion import two_body_energies
from trap.basis import BoxTrap, CustomTrap, HarmonicTrap, eigenbasis
from wells.permutation import symmetric_group


@pytest.fixture(scope="module")
def harmonic():
    return eigenbasis(HarmonicTrap(), 6)


@pytest.fixture(scope="module")
def three_particles():
    return ProductBasisHamiltonian.for_trap(HarmonicTrap(), 3, 5).assemble()


def test_gaussian_overlap(harmonic):
    assert overlap4(harmonic, 0, 0, 0, 0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-9)


def test_odd_overlap_vanishes(harmonic):
    assert overlap4(harmonic, 0, 0, 0, 1) == pytest.approx(0.0, abs=1e-12)
    assert overlap4(harmonic, 1, 2, 2, 2) == pytest.approx(0.0, abs=1e-12)


def test_box_overlap():
    assert overlap4(eigenbasis(BoxTrap(length=1.0), 2), 0, 0, 0, 0) == pytest.approx(1.5, rel=1e-10)


def test_overlap_is_symmetric(harmonic):
    value = overlap4(harmonic, 0, 1, 2, 3)
    assert overlap4(harmonic, 3, 2, 1, 0) == pytest.approx(value, rel=1e-12)
    assert overlap4(harmonic, 2, 0, 3, 1) == pytest.approx(value, rel=1e-12)


def test_tensor_matches_single_overlaps(harmonic):
    tensor = overlap_tensor(harmonic, 4)
    assert tensor.shape == (4, 4, 4, 4)
    assert tensor[1, 1, 2, 0] == pytest.approx(overlap4(harmonic, 0, 1, 1, 2), rel=1e-9, abs=1e-13)
    np.testing.assert_allclose(tensor, tensor.transpose(2, 0, 3, 1), atol=1e-13)


def test_tensor_cutoff_is_checked(harmonic):
    with pytest.raises(DomainError):
        overlap_tensor(harmonic, 8)


def test_noninteracting_ground_state():
    eigenvalues = ed_spectrum(EDConfig(trap=HarmonicTrap(), n_particles=3, g=0.0, cutoff=6))
    assert eigenvalues[0] == pytest.approx(1.5, abs=1e-12)
    assert len(eigenvalues) == 2 * 6 + 10
    assert np.all(np.diff(eigenvalues) >= 0)


def test_hamiltonian_is_symmetric(three_particles):
    matrix = three_particles.matrix(4.0)
    np.testing.assert_allclose(matrix, matrix.T, atol=1e-13)


def test_commutes_with_particle_relabeling(three_particles):
    matrix = three_particles.matrix(7.0)
    for p in symmetric_group(3):
        operator = three_particles.permutation_operator(p)
        np.testing.assert_allclose(operator @ matrix, matrix @ operator, atol=1e-10)


def test_two_particles_commute_with_exchange():
    hamiltonian = ProductBasisHamiltonian.for_trap(BoxTrap(length=1.0), 2, 8)
    matrix = hamiltonian.matrix(3.0)
    for p in symmetric_group(2):
        operator = hamiltonian.permutation_operator(p)
        np.testing.assert_allclose(operator @ matrix, matrix @ operator, atol=1e-10)


def test_relabeling_moves_orbitals(three_particles):
    p = next(p for p in symmetric_group(3) if p(1) == 2 and p(2) == 3)
    state = np.ravel_multi_index((0, 1, 4), three_particles.shape)
    image = three_particles.permutation_images(p)[state]
    # particle 2 takes particle 1's orbital, particle 3 takes particle 2's, particle 1 takes particle 3's
    assert np.unravel_index(image, three_particles.shape) == (4, 0, 1)


def test_reflection_commutes(three_particles):
    reflection = three_particles.reflection_diagonal()
    matrix = three_particles.matrix(5.0)
    np.testing.assert_allclose(reflection[:, None] * matrix * reflection[None, :], matrix, atol=1e-12)


def test_asymmetric_trap_has_no_reflection():
    trap = CustomTrap.sample(lambda x: 0.5 * (x - 0.5) ** 2, -7.0, 8.0, 1200)
    hamiltonian = ProductBasisHamiltonian(eigenbasis(trap, 3), 2, 4)
    assert hamiltonian.reflection_diagonal() is None


def test_two_particles_against_relative_motion():
    eigenvalues = ed_spectrum(EDConfig(trap=HarmonicTrap(), n_particles=2, g=2.0, cutoff=20))
    exact = two_body_energies(2.0, 2)
    # the truncated basis is variational; the odd relative state is exact
    assert exact[0] - 1e-9 <= eigenvalues[0] <= exact[0] + 0.05
    assert np.min(np.abs(eigenvalues - 2.0)) < 1e-10


def test_ground_state_stays_below_unitary_limit():
    eigenvalues = ed_spectrum(EDConfig(trap=HarmonicTrap(), n_particles=3, g=30.0, cutoff=8))
    assert eigenvalues[0] < 4.5


def test_repulsion_raises_every_level(three_particles):
    weak = three_particles.lowest(1.0, 10)
    strong = three_particles.lowest(3.0, 10)
    assert np.all(strong >= weak - 1e-12)


def test_lowest_returns_vectors(three_particles):
    values, vectors = three_particles.lowest(2.0, 4, vectors=True)
    matrix = three_particles.matrix(2.0)
    np.testing.assert_allclose(matrix @ vectors, vectors * values, atol=1e-10)


def test_config_limits():
    with pytest.raises(DimensionGuardError):
        EDConfig(trap=HarmonicTrap(), n_particles=3, g=1.0, cutoff=22).check_limits()
    with pytest.raises(DomainError):
        EDConfig(trap=HarmonicTrap(), n_particles=3, g=1.0, cutoff=5).check_limits()
    with pytest.raises(DomainError):
        EDConfig(trap=HarmonicTrap(), n_particles=3, g=1.0, target_level=LevelIndex(quanta=[0, 1])).check_limits()
    with pytest.raises(DimensionGuardError):
        ProductBasisHamiltonian(eigenbasis(HarmonicTrap(), 21), 3, 22)


@pytest.mark.parametrize("fields", [{"g": -1.0}, {"g": math.inf}, {"n_particles": 4}, {"cutoff": 1}])
def test_config_validation(fields):
    base = {"trap": HarmonicTrap(), "n_particles": 3, "g": 1.0}
    with pytest.raises(ValidationError):
        EDConfig(**{**base, **fields})


def test_config_defaults():
    config = EDConfig(trap=HarmonicTrap(), n_particles=3, g=1.0)
    assert config.cutoff == 12
    assert config.level.quanta == [0, 1, 2]
    assert config.dimension == 1728
    assert config.default_count() == 22
