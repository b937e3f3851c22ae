"""Uniformly random Clifford operators as symplectic tableaus.

A Clifford (mod global phase) is a signed image for each X_k and Z_k
generator.  Sampling builds a uniformly random symplectic basis of
F_2^{2n} pair by pair: the k-th X image is uniform over the nonzero
vectors of the current symplectic complement, the k-th Z image uniform
over the vectors of that complement with odd commutation parity against
it, and signs are uniform bits.  This yields the exact uniform
distribution over the Clifford group, hence an exact unitary 2-design.

Symplectic vectors are (x_bits | z_bits) over GF(2); the form
<u, v> = u_x . v_z + u_z . v_x is the anticommutation parity of the
corresponding Pauli words.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliSum, _word_phase_vector, multiply
from .states import StateVector, basis_state


def _symplectic_parity(u: np.ndarray, v: np.ndarray, n: int) -> int:
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def _nullspace_gf2(constraints: list[np.ndarray], width: int) -> np.ndarray:
    """Basis (rows) of the solution space of constraint . v = 0 over GF(2)."""
    if not constraints:
        return np.eye(width, dtype=np.uint8)
    mat = np.array(constraints, dtype=np.uint8) % 2
    rows, cols = mat.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if mat[i, c]), None)
        if pivot is None:
            continue
        mat[[r, pivot]] = mat[[pivot, r]]
        for i in range(rows):
            if i != r and mat[i, c]:
                mat[i] ^= mat[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            if i < r and mat[i, c]:
                basis[k, pc] = 1
    return basis


@dataclass(frozen=True)
class CliffordTableau:
    """Images C X_k C^dag and C Z_k C^dag as signed Pauli words."""

    n_qubits: int
    x_images: tuple[tuple[PauliString, int], ...]
    z_images: tuple[tuple[PauliString, int], ...]

    def conjugate_word(self, word: PauliString) -> tuple[PauliString, complex]:
        """C P C^dag for a positive-phase word P, as (word, coefficient)."""
        if word.n_qubits != self.n_qubits:
            raise ValueError("word dimension does not match tableau")
        acc = PauliString.identity(self.n_qubits)
        coeff = 1.0 + 0.0j
        for k in range(self.n_qubits):
            if (word.x_mask >> k) & 1:
                img, sign = self.x_images[k]
                acc, phase = multiply(acc, img)
                coeff *= phase * sign
            if (word.z_mask >> k) & 1:
                img, sign = self.z_images[k]
                acc, phase = multiply(acc, img)
                coeff *= phase * sign
        # refold the i^{y count} prefactor of the source word
        coeff *= (1j) ** (word.y_count() % 4)
        return acc, coeff

    def conjugate_sum(self, op: PauliSum) -> PauliSum:
        out: dict[PauliString, complex] = {}
        for word, c in op.terms.items():
            new_word, phase = self.conjugate_word(word)
            out[new_word] = out.get(new_word, 0.0) + c * phase
        return PauliSum(op.n_qubits, out)

    def apply_to_basis_state(self, index: int) -> StateVector:
        """Statevector of C |index>, reconstructed from its stabilizers."""
        n = self.n_qubits
        dim = 1 << n
        # C |b> is stabilized by (-1)^{b_k} C Z_k C^dag
        stabilizers = []
        for k in range(n):
            img, sign = self.z_images[k]
            flip = -1.0 if (index >> k) & 1 else 1.0
            stabilizers.append((img, sign * flip))
        basis_indices = np.arange(dim)
        for start in range(dim):
            amps = basis_state(n, start).amplitudes
            ok = True
            for word, sign in stabilizers:
                idx = basis_indices ^ word.x_mask
                word_amps = _word_phase_vector(word, idx) * amps[idx]
                projected = 0.5 * (amps + sign * word_amps)
                if float(np.linalg.norm(projected)) < 1e-12:
                    ok = False
                    break
                amps = projected
            if ok:
                return StateVector(n, amps / np.linalg.norm(amps))
        raise RuntimeError("stabilizer projection found no support")  # unreachable


def _vector_to_word(vec: np.ndarray, n: int) -> PauliString:
    x = int(sum(int(vec[k]) << k for k in range(n)))
    z = int(sum(int(vec[n + k]) << k for k in range(n)))
    return PauliString(n, x, z)


def random_clifford(n_qubits: int, rng: np.random.Generator) -> CliffordTableau:
    n = n_qubits
    width = 2 * n
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    constraints: list[np.ndarray] = []
    for _ in range(n):
        basis = _nullspace_gf2(constraints, width)
        # uniform nonzero element of the current complement
        while True:
            coeffs = rng.integers(0, 2, size=basis.shape[0])
            e = (coeffs @ basis) % 2
            if e.any():
                break
        # uniform element with <e, f> = 1: shift the even half onto the odd
        shift = next(b for b in basis if _symplectic_parity(e, b, n) == 1)
        coeffs = rng.integers(0, 2, size=basis.shape[0])
        f = (coeffs @ basis) % 2
        if _symplectic_parity(e, f, n) == 0:
            f = (f + shift) % 2
        pairs.append((e, f))
        # symplectic-orthogonality constraints for later pairs: swap halves
        constraints.append(np.concatenate([e[n:], e[:n]]))
        constraints.append(np.concatenate([f[n:], f[:n]]))
    signs = rng.integers(0, 2, size=width)
    x_images = tuple(
        (_vector_to_word(e, n), 1 - 2 * int(signs[2 * k])) for k, (e, _) in enumerate(pairs)
    )
    z_images = tuple(
        (_vector_to_word(f, n), 1 - 2 * int(signs[2 * k + 1])) for k, (_, f) in enumerate(pairs)
    )
    return CliffordTableau(n, x_images, z_images)


def random_2design_state(n_qubits: int, seed: int, occupied: int = 0) -> StateVector:
    """Uniformly random Clifford applied to the basis state with the
    lowest ``occupied`` qubits filled; deterministic per seed."""
    rng = np.random.default_rng(seed)
    tableau = random_clifford(n_qubits, rng)
    return tableau.apply_to_basis_state((1 << occupied) - 1)
