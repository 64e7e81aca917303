"""
Trap Model Tool

Diagonalizes the axial anharmonic trap Hamiltonian

    H0 = p^2/2m + q (k z^2/2 + k' z^4/24)

in a basis of M eigenfunctions of its harmonic part and exposes energies,
transition frequencies and the dipole matrix of the lowest D eigenstates.
The quartic matrix is built from ladder operators, so no quadrature enters.
"""

import logging
from typing import Iterable, List, Optional

import numpy as np
from scipy import linalg

from models.eigen_basis import EigenBasis, TransitionLine
from models.trap_params import TrapParams
from tools.src.exceptions import ConfigurationError, NumericalError
from tools.src.units import angular_to_hz

logger = logging.getLogger(__name__)


def harmonic_frequency(params: TrapParams) -> float:
    """omega = sqrt(q k / m), a.u."""
    return float(np.sqrt(params.charge * params.k / params.mass))


def oscillator_length(params: TrapParams) -> float:
    """sqrt(hbar / m omega), a.u."""
    return float(np.sqrt(1.0 / (params.mass * harmonic_frequency(params))))


def position_operator(size: int, length: float) -> np.ndarray:
    """z = L (a + a^dagger)/sqrt(2) in the first `size` oscillator states"""
    annihilation = np.diag(np.sqrt(np.arange(1, size)), k=1)
    return length / np.sqrt(2.0) * (annihilation + annihilation.T)


def primitive_hamiltonian(params: TrapParams) -> np.ndarray:
    """H0 in the harmonic-oscillator primitive basis (M x M)"""
    size = params.primitive_size
    omega = harmonic_frequency(params)

    # z^4 couples n to n +- 4; four extra states make the truncated block exact
    z_extended = position_operator(size + 4, oscillator_length(params))
    z_squared = z_extended @ z_extended
    z_fourth = (z_squared @ z_squared)[:size, :size]

    harmonic = np.diag(omega * (np.arange(size) + 0.5))
    return harmonic + params.charge * params.k_quart / 24.0 * z_fourth


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude coefficient of every eigenvector positive"""
    rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def solve_trap(params: TrapParams) -> EigenBasis:
    """
    Diagonalize the trap Hamiltonian and keep the lowest D eigenpairs

    Args:
        params: Trap parameters (validated sizes 0 < N <= D <= M)

    Returns:
        EigenBasis with ascending energies, sign-fixed eigenvectors,
        symmetric position matrix <j|z|k> and dipole mu_jk = q <j|z|k>

    Raises:
        ConfigurationError: D > M or the diagonalization fails
        NumericalError: Degenerate eigenvalues (no strict ordering)
    """
    size = params.primitive_size
    dimension = params.dynamical_size
    if dimension > size:
        raise ConfigurationError(f"Dynamical size D={dimension} exceeds primitive size M={size}")

    hamiltonian = primitive_hamiltonian(params)
    try:
        energies, vectors = linalg.eigh(hamiltonian, subset_by_index=[0, dimension - 1])
    except (linalg.LinAlgError, ValueError) as exc:
        raise ConfigurationError(f"Trap diagonalization failed: {exc}") from exc

    if dimension > 1 and not np.all(np.diff(energies) > 0):
        raise NumericalError("Trap eigenenergies are not strictly ascending")

    vectors = _fix_signs(vectors)
    z_primitive = position_operator(size, oscillator_length(params))
    z_matrix = vectors.T @ z_primitive @ vectors
    z_matrix = 0.5 * (z_matrix + z_matrix.T)

    omega = harmonic_frequency(params)
    logger.info(
        "Trap basis built: M=%d D=%d omega=%.6e a.u. (%.6f MHz)",
        size, dimension, omega, angular_to_hz(omega) / 1e6,
    )
    return EigenBasis(
        energies=energies,
        vectors=vectors,
        z_matrix=z_matrix,
        dipole=params.charge * z_matrix,
        omega=omega,
        computational_size=params.computational_size,
        charge=params.charge,
        params=params,
    )


def perturbative_energies(params: TrapParams, levels: int) -> np.ndarray:
    """
    First-order estimate E_n = omega(n+1/2) + (q k'/24) 3 (1/2m omega)^2 (2n^2+2n+1)

    Accurate only when the quartic shift is small compared with omega.
    """
    n = np.arange(levels)
    omega = harmonic_frequency(params)
    shift = params.charge * params.k_quart / 24.0 * 3.0 * (1.0 / (2.0 * params.mass * omega)) ** 2
    return omega * (n + 0.5) + shift * (2 * n ** 2 + 2 * n + 1)


def neighbour_frequencies(basis: EigenBasis, size: Optional[int] = None) -> np.ndarray:
    """nu_{j,j+1} in Hz for j < size-1"""
    size = basis.computational_size if size is None else size
    return angular_to_hz(np.diff(basis.energies[:size]))


def transition_table(
    basis: EigenBasis,
    deltas: Iterable[int],
    size: Optional[int] = None,
) -> List[TransitionLine]:
    """
    List the transitions (j, j+delta) inside the computational register

    Args:
        basis: Diagonalized trap
        deltas: Changes of the motional quantum number; signs are ignored
        size: Register size N (defaults to the basis' computational size)

    Returns:
        TransitionLine entries ordered by |delta| then j, with frequency
        (E_k - E_j)/h in Hz and the dipole element mu_jk
    """
    size = basis.computational_size if size is None else size
    steps = sorted({abs(int(d)) for d in deltas})
    if not steps:
        raise ValueError("At least one delta is required")
    if 0 in steps:
        raise ValueError("delta = 0 is not a transition")
    if size > basis.size:
        raise ValueError(f"Register size {size} exceeds the basis size {basis.size}")

    lines = []
    for delta in steps:
        for j in range(size - delta):
            k = j + delta
            lines.append(TransitionLine(
                j=j,
                k=k,
                frequency_hz=float(angular_to_hz(basis.energies[k] - basis.energies[j])),
                dipole_au=float(basis.dipole[j, k]),
            ))
    return lines
