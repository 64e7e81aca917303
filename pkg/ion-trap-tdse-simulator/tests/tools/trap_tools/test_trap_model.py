"""
Tests for the Trap Model Tool

Tests the diagonalization of the anharmonic trap including:
- Harmonic frequency and its value in MHz
- Harmonic-limit spectrum and dipole matrix
- First-order perturbation oracle for weak anharmonicity
- Sign convention and ordering of the eigenvectors
- Transition table contents
- Size validation
"""

import numpy as np
import pytest
from pydantic import ValidationError

from models.trap_params import TrapParams
from tools.src.exceptions import ConfigurationError
from tools.src.trap_tools.trap_model import (
    harmonic_frequency,
    neighbour_frequencies,
    oscillator_length,
    perturbative_energies,
    position_operator,
    solve_trap,
    transition_table,
)
from tools.src.units import angular_to_hz

pytestmark = pytest.mark.unit


class TestHarmonicFrequency:
    """Test suite for the trap frequency"""

    def test_default_trap_frequency(self):
        """omega = sqrt(k/m) for the 111Cd+ ion"""
        omega = harmonic_frequency(TrapParams())
        assert omega == pytest.approx(4.208e-10, rel=1e-3)

    def test_frequency_in_mhz(self):
        assert angular_to_hz(harmonic_frequency(TrapParams())) == pytest.approx(2.77e6, rel=1e-3)

    def test_oscillator_length(self):
        params = TrapParams()
        expected = np.sqrt(1.0 / (params.mass * harmonic_frequency(params)))
        assert oscillator_length(params) == pytest.approx(expected)


class TestPositionOperator:
    """Test suite for the ladder-operator position matrix"""

    def test_symmetric_tridiagonal(self):
        z = position_operator(6, 2.0)
        assert np.array_equal(z, z.T)
        assert np.count_nonzero(np.triu(z, 2)) == 0

    def test_matrix_elements(self):
        z = position_operator(6, 2.0)
        for n in range(5):
            assert z[n, n + 1] == pytest.approx(2.0 * np.sqrt((n + 1) / 2.0))


class TestHarmonicLimit:
    """k' = 0 reproduces the harmonic oscillator exactly"""

    def test_equal_spacing(self, harmonic_basis):
        gaps = np.diff(harmonic_basis.energies)
        assert np.allclose(gaps, harmonic_basis.omega, rtol=1e-10, atol=0.0)

    def test_zero_point_energy(self, harmonic_basis):
        assert harmonic_basis.energies[0] == pytest.approx(0.5 * harmonic_basis.omega, rel=1e-10)

    def test_neighbour_dipoles(self, harmonic_basis):
        """mu_{j,j+1} = q sqrt((j+1)/2 m omega)"""
        params = harmonic_basis.params
        for j in range(harmonic_basis.size - 1):
            expected = params.charge * np.sqrt((j + 1) / (2.0 * params.mass * harmonic_basis.omega))
            assert harmonic_basis.dipole[j, j + 1] == pytest.approx(expected, rel=1e-8)

    def test_ground_to_first_dipole(self, harmonic_basis):
        assert harmonic_basis.dipole[0, 1] == pytest.approx(76.6, rel=1e-3)

    def test_parity(self, harmonic_basis):
        """mu_jk vanishes for even |j - k|"""
        size = harmonic_basis.size
        j, k = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        assert np.all(harmonic_basis.dipole[(j - k) % 2 == 0] == 0.0)


class TestAnharmonicTrap:
    """Test suite for solve_trap with the quartic term"""

    def test_weak_anharmonicity_matches_perturbation(self):
        """First-order estimate holds for n <= 8 when k' is small"""
        params = TrapParams(k_quart=3.5828e-20)
        basis = solve_trap(params)
        estimate = perturbative_energies(params, 9)
        assert np.allclose(basis.energies[:9], estimate, rtol=1e-3, atol=0.0)

    def test_quartic_term_raises_levels(self, paper_basis, harmonic_basis):
        assert np.all(paper_basis.energies > harmonic_basis.energies)

    def test_spacings_grow(self, paper_basis):
        """A positive quartic term stiffens the trap at higher energies"""
        assert np.all(np.diff(neighbour_frequencies(paper_basis)) > 0)

    def test_register_lines_cross_five_megahertz_at_the_top(self, paper_basis):
        """Only the two highest register transitions sit above 5 MHz"""
        frequencies = neighbour_frequencies(paper_basis)
        assert frequencies.size == 15
        assert np.all(frequencies[:13] < 5.0e6)
        assert frequencies[13] == pytest.approx(5.04e6, abs=1e4)
        assert frequencies[14] == pytest.approx(5.13e6, abs=1e4)

    def test_energies_strictly_ascending(self, paper_basis):
        assert np.all(np.diff(paper_basis.energies) > 0)

    def test_sizes(self, paper_basis):
        assert paper_basis.size == 32
        assert paper_basis.computational_size == 16
        assert paper_basis.vectors.shape == (50, 32)

    def test_orthonormal_vectors(self, paper_basis):
        overlap = paper_basis.vectors.T @ paper_basis.vectors
        assert np.allclose(overlap, np.eye(32), atol=1e-12)

    def test_largest_coefficient_positive(self, paper_basis):
        vectors = paper_basis.vectors
        rows = np.argmax(np.abs(vectors), axis=0)
        assert np.all(vectors[rows, np.arange(vectors.shape[1])] > 0)

    def test_symmetric_dipole(self, paper_basis):
        assert np.array_equal(paper_basis.dipole, paper_basis.dipole.T)
        assert np.allclose(paper_basis.dipole, paper_basis.charge * paper_basis.z_matrix)

    def test_even_potential_keeps_parity(self, paper_basis):
        assert abs(paper_basis.z_matrix[0, 0]) < 1e-8
        assert abs(paper_basis.z_matrix[0, 2]) < 1e-8

    def test_register_converged_in_primitive_size(self, paper_basis):
        """Enlarging M leaves the register energies unchanged"""
        larger = solve_trap(TrapParams(primitive_size=60))
        assert np.allclose(larger.energies[:16], paper_basis.energies[:16], rtol=1e-4, atol=0.0)


class TestTransitionTable:
    """Test suite for transition_table"""

    def test_paper_register_has_28_lines(self, paper_basis):
        lines = transition_table(paper_basis, (1, 3))
        assert len(lines) == 15 + 13

    def test_order_and_contents(self, paper_basis):
        lines = transition_table(paper_basis, (3, 1))
        assert [line.delta for line in lines[:15]] == [1] * 15
        first = lines[0]
        assert (first.j, first.k) == (0, 1)
        assert first.frequency_hz == pytest.approx(angular_to_hz(paper_basis.energies[1] - paper_basis.energies[0]))
        assert first.dipole_au == paper_basis.dipole[0, 1]

    def test_negative_deltas_fold(self, desk_basis):
        assert transition_table(desk_basis, (-1,)) == transition_table(desk_basis, (1,))

    def test_delta_larger_than_register(self, desk_basis):
        assert transition_table(desk_basis, (5,)) == []

    def test_empty_deltas(self, desk_basis):
        with pytest.raises(ValueError, match="At least one delta"):
            transition_table(desk_basis, ())

    def test_zero_delta(self, desk_basis):
        with pytest.raises(ValueError, match="not a transition"):
            transition_table(desk_basis, (0, 1))

    def test_register_larger_than_basis(self, desk_basis):
        with pytest.raises(ValueError, match="exceeds"):
            transition_table(desk_basis, (1,), size=9)


class TestSizeValidation:
    """N <= D <= M is enforced when the parameters are built"""

    def test_dynamical_exceeds_primitive(self):
        with pytest.raises(ValidationError, match="N <= D <= M"):
            TrapParams(primitive_size=20, dynamical_size=32)

    def test_register_exceeds_dynamical(self):
        with pytest.raises(ValidationError):
            TrapParams(dynamical_size=8, computational_size=16)

    def test_solve_trap_rejects_oversized_basis(self):
        """Parameters built without validation still fail cleanly"""
        params = TrapParams.model_construct(**{**TrapParams().model_dump(), "dynamical_size": 60})
        with pytest.raises(ConfigurationError, match="exceeds primitive size"):
            solve_trap(params)
