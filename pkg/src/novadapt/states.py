"""Dense exact statevector simulation.

States are unit complex vectors of length 2^n with qubit k living in bit
k of the basis index.  Generator exponentials e^{i theta A} are exact:
either a closed-form single-word rotation, a cached eigendecomposition of
the (Hermitian) generator, or a first-order product of term rotations
when Trotterization is explicitly requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import PauliString, PauliSum, _word_phase_vector

NORM_TOL = 1e-10
IMAG_TOL = 1e-10

# crossover sizes for the dense-matrix application shortcut
_DENSE_MAX_QUBITS = 10


@dataclass(frozen=True)
class StateVector:
    """Unit-norm amplitude vector; length must be exactly 2^n_qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude vector length is not 2^n_qubits")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm drifted to {norm!r}")

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.overlap(other)) ** 2)


@dataclass(frozen=True)
class EnergyReport:
    """Energy with optional first/second derivative along one generator."""

    energy: float
    gradient: float | None = None
    second_derivative: float | None = None


def basis_state(n_qubits: int, index: int) -> StateVector:
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[index] = 1.0
    return StateVector(n_qubits, amps)


def hartree_fock_state(n_qubits: int, n_electrons: int) -> StateVector:
    """Computational basis state occupying the lowest n_electrons orbitals."""
    if not 0 <= n_electrons <= n_qubits:
        raise ValueError("electron count out of range")
    return basis_state(n_qubits, (1 << n_electrons) - 1)


@lru_cache(maxsize=24)
def _dense_matrix(op: PauliSum) -> np.ndarray:
    return op.to_dense()


@lru_cache(maxsize=64)
def _gather_tables(op: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    """Per-term gather indices and phased weights for vectorized application."""
    dim = 1 << op.n_qubits
    basis = np.arange(dim)
    terms = op.canonical_terms()
    gather = np.empty((len(terms), dim), dtype=np.int64)
    weights = np.empty((len(terms), dim), dtype=complex)
    for t, (word, coeff) in enumerate(terms):
        gather[t] = basis ^ word.x_mask
        weights[t] = coeff * _word_phase_vector(word, gather[t])
    return gather, weights


def apply_pauli_sum(op: PauliSum, amplitudes: np.ndarray) -> np.ndarray:
    """op |psi> as a raw amplitude vector (no normalization implied)."""
    dim = amplitudes.shape[0]
    if not op.terms:
        return np.zeros_like(amplitudes)
    if op.n_qubits <= _DENSE_MAX_QUBITS and len(op.terms) > dim // 8:
        return _dense_matrix(op) @ amplitudes
    gather, weights = _gather_tables(op)
    return np.einsum("td,td->d", weights, amplitudes[gather])


def expectation(state: StateVector, op: PauliSum) -> float:
    """<psi|op|psi> for Hermitian op; raises if the imaginary residue is
    not numerically zero."""
    if state.n_qubits != op.n_qubits:
        raise ValueError("state and operator dimensions differ")
    if not op.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    value = complex(np.vdot(state.amplitudes, apply_pauli_sum(op, state.amplitudes)))
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"imaginary residue {value.imag!r} in expectation value")
    return value.real


@lru_cache(maxsize=64)
def _eigendecomposition(op: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    eigvals, eigvecs = np.linalg.eigh(_dense_matrix(op) if op.n_qubits <= _DENSE_MAX_QUBITS else op.to_dense())
    return eigvals, eigvecs


def _rotate_single_term(amplitudes: np.ndarray, word: PauliString, coeff: float, angle: float) -> np.ndarray:
    # e^{i t c P} = cos(tc) I + i sin(tc) P, exact because P^2 = I
    c = angle * coeff
    idx = np.arange(amplitudes.shape[0]) ^ word.x_mask
    return np.cos(c) * amplitudes + (1j * np.sin(c)) * (_word_phase_vector(word, idx) * amplitudes[idx])


def exp_action(generator: PauliSum, angle: float, amplitudes: np.ndarray) -> np.ndarray:
    """Raw e^{i angle generator} action on an (arbitrary-norm) amplitude
    array via the cached eigendecomposition; exact for Hermitian input."""
    if angle == 0.0 or not generator.terms:
        return amplitudes
    eigvals, eigvecs = _eigendecomposition(generator)
    return eigvecs @ (np.exp(1j * angle * eigvals) * (eigvecs.conj().T @ amplitudes))


def commuting_exp_action(generator: PauliSum, angle: float, amplitudes: np.ndarray) -> np.ndarray:
    """Raw exact exponential action for generators with pairwise commuting
    terms, as a product of single-term rotations (no dense work)."""
    if angle == 0.0:
        return amplitudes
    for word, coeff in generator.canonical_terms():
        amplitudes = _rotate_single_term(amplitudes, word, coeff.real, angle)
    return amplitudes


def apply_exp(
    state: StateVector,
    generator: PauliSum,
    angle: float,
    mode: str = "exact_dense",
    steps: int = 1,
) -> StateVector:
    """e^{i angle generator} |state>.

    Modes: ``exact_dense`` (eigendecomposition, n <= 14),
    ``single_term_rotation`` (one-term generator, closed form), and
    ``trotter`` (first-order product over the canonical term order,
    repeated ``steps`` times).
    """
    if state.n_qubits != generator.n_qubits:
        raise ValueError("state and generator dimensions differ")
    if not generator.is_hermitian():
        raise ValueError("generator must be Hermitian")
    amps = state.amplitudes
    if mode == "single_term_rotation":
        if len(generator.terms) != 1:
            raise ValueError("single_term_rotation requires a one-term generator")
        ((word, coeff),) = generator.terms.items()
        amps = _rotate_single_term(amps, word, coeff.real, angle)
    elif mode == "exact_dense":
        if generator.n_qubits > 14:
            raise ValueError("exact_dense exponential limited to 14 qubits")
        amps = exp_action(generator, angle, amps)
    elif mode == "trotter":
        if steps < 1:
            raise ValueError("trotter steps must be >= 1")
        slice_angle = angle / steps
        terms = generator.canonical_terms()
        for _ in range(steps):
            for word, coeff in terms:
                amps = _rotate_single_term(amps, word, coeff.real, slice_angle)
    else:
        raise ValueError(f"unknown apply_exp mode {mode!r}")
    return StateVector(state.n_qubits, amps)


def apply_commuting_exp(state: StateVector, generator: PauliSum, angle: float) -> StateVector:
    """Exact e^{i angle generator} for generators whose terms all commute,
    as a product of single-term rotations (no dense work)."""
    return StateVector(state.n_qubits, commuting_exp_action(generator, angle, state.amplitudes))


def energy_gradient(
    state: StateVector,
    h: PauliSum,
    a: PauliSum,
    h_psi: np.ndarray | None = None,
) -> float:
    """d/d theta of <e^{-i theta a} h e^{i theta a}> at theta = 0, which is
    i<[h, a]>.  ``h_psi`` may carry a precomputed h|psi> so that pool
    screening applies the Hamiltonian once per state."""
    phi = apply_pauli_sum(h, state.amplitudes) if h_psi is None else h_psi
    u = apply_pauli_sum(a, state.amplitudes)
    value = complex(np.vdot(phi, u))
    return -2.0 * value.imag


def energy_second_derivative(
    state: StateVector,
    h: PauliSum,
    a: PauliSum,
    h_psi: np.ndarray | None = None,
) -> float:
    """Second derivative of the energy along e^{i eta a} at eta = 0,
    equal to -<[[h, a], a]>."""
    phi = apply_pauli_sum(h, state.amplitudes) if h_psi is None else h_psi
    u = apply_pauli_sum(a, state.amplitudes)
    w = apply_pauli_sum(a, u)
    hu = apply_pauli_sum(h, u)
    bracket = 2.0 * complex(np.vdot(phi, w)).real - 2.0 * complex(np.vdot(u, hu)).real
    return -bracket


def exact_ground_energy(h: PauliSum) -> tuple[float, StateVector]:
    """Smallest eigenvalue and eigenvector from dense diagonalization."""
    if h.n_qubits > 14:
        raise ValueError("exact diagonalization limited to 14 qubits")
    if not h.is_hermitian():
        raise ValueError("exact_ground_energy requires a Hermitian sum")
    eigvals, eigvecs = _eigendecomposition(h)
    energy = float(eigvals[0])
    vec = eigvecs[:, 0]
    residual = float(np.linalg.norm(apply_pauli_sum(h, vec) - energy * vec))
    if residual > 1e-9:
        raise ValueError(f"eigenpair residual {residual!r} too large")
    return energy, StateVector(h.n_qubits, vec)
