"""Sparse Pauli-string algebra on symplectic bitmasks.

A Pauli word on n qubits is stored as a pair of integer masks: bit k of
``x_mask`` means an X component on qubit k, bit k of ``z_mask`` a Z
component, and both bits set means Y.  The stored word is always the
positive-phase tensor product of I/X/Y/Z letters; any phase produced by
multiplication is returned separately (and ultimately folded into sum
coefficients).  Products and commutators are therefore two XORs plus a
phase exponent, which is what makes pool screening cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

PRUNE_THRESHOLD = 1e-12
HERMITICITY_TOL = 1e-10

_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)
_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, slots=True)
class PauliString:
    """Positive-phase Pauli word; qubit k lives in bit k of the masks."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        mask = (1 << self.n_qubits) - 1
        if (self.x_mask & ~mask) or (self.z_mask & ~mask):
            raise ValueError("masks use bits beyond n_qubits")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_word(cls, word: str) -> "PauliString":
        """Parse a letter-per-qubit word like ``"XIYZ"`` (char 0 = qubit 0)."""
        x = z = 0
        for k, letter in enumerate(word):
            try:
                xb, zb = _MASKS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r} in {word!r}") from None
            x |= xb << k
            z |= zb << k
        return cls(len(word), x, z)

    @classmethod
    def from_label(cls, label: str, n_qubits: int) -> "PauliString":
        """Parse an indexed label like ``"X0 Z1 Y4"``; empty means identity."""
        x = z = 0
        for token in label.split():
            letter, idx = token[0], int(token[1:])
            if idx >= n_qubits:
                raise ValueError(f"qubit index {idx} out of range in {label!r}")
            xb, zb = _MASKS[letter.upper()]
            x |= xb << idx
            z |= zb << idx
        return cls(n_qubits, x, z)

    def word(self) -> str:
        return "".join(
            _LETTERS[((self.x_mask >> k) & 1, (self.z_mask >> k) & 1)]
            for k in range(self.n_qubits)
        )

    def label(self) -> str:
        parts = []
        for k in range(self.n_qubits):
            letter = _LETTERS[((self.x_mask >> k) & 1, (self.z_mask >> k) & 1)]
            if letter != "I":
                parts.append(f"{letter}{k}")
        return " ".join(parts) if parts else "I"

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def commutes_with(self, other: "PauliString") -> bool:
        """Pauli words either commute or anticommute; True on commute."""
        anti = (self.x_mask & other.z_mask).bit_count() + (self.z_mask & other.x_mask).bit_count()
        return anti % 2 == 0

    def to_matrix(self) -> np.ndarray:
        mat = np.ones((1, 1), dtype=complex)
        for letter in self.word():
            # qubit 0 is the least-significant index bit, so it is the
            # rightmost kron factor
            mat = np.kron(_PAULI_MATS[letter], mat)
        return mat


def multiply(a: PauliString, b: PauliString) -> tuple[PauliString, complex]:
    """Product of two Pauli words as (canonical word, phase in {±1, ±i})."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # write each word as i^{|x&z|} X^x Z^z, commute Z^za past X^xb, refold
    exponent = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        - (x & z).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
    )
    return PauliString(a.n_qubits, x, z), _PHASES[exponent % 4]


class PauliSum:
    """Real- or complex-weighted sum of Pauli words on a fixed register.

    Terms with coefficient magnitude below ``PRUNE_THRESHOLD`` are dropped
    at construction; instances are immutable and hashable so expensive
    derived data (dense matrices, eigendecompositions) can be cached on
    the object identity.
    """

    __slots__ = ("n_qubits", "_terms", "_hash")

    def __init__(self, n_qubits: int, terms: Mapping[PauliString, complex] | Iterable[tuple[PauliString, complex]] = ()):
        if n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[PauliString, complex] = {}
        for word, coeff in items:
            if word.n_qubits != n_qubits:
                raise ValueError("term qubit count does not match sum")
            merged[word] = merged.get(word, 0.0) + complex(coeff)
        pruned = {w: c for w, c in merged.items() if abs(c) > PRUNE_THRESHOLD}
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "_terms", pruned)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("PauliSum is immutable")

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def from_label_terms(cls, n_qubits: int, *terms: tuple[complex, str]) -> "PauliSum":
        """Build from (coefficient, label) pairs, labels as in ``PauliString.from_label``."""
        return cls(n_qubits, [(PauliString.from_label(lbl, n_qubits), c) for c, lbl in terms])

    @property
    def terms(self) -> Mapping[PauliString, complex]:
        return self._terms

    def canonical_terms(self) -> list[tuple[PauliString, complex]]:
        """Terms in a fixed (x_mask, z_mask) order, for serialization and Trotter products."""
        return sorted(self._terms.items(), key=lambda t: (t[0].x_mask, t[0].z_mask))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, complex]]:
        return iter(self.canonical_terms())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            key = (self.n_qubits, tuple((w, c) for w, c in self.canonical_terms()))
            object.__setattr__(self, "_hash", hash(key))
        return self._hash

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_compatible(other)
        combined = dict(self._terms)
        for w, c in other._terms.items():
            combined[w] = combined.get(w, 0.0) + c
        return PauliSum(self.n_qubits, combined)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.n_qubits, {w: c * scalar for w, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        """Operator product, expanding all word pairs."""
        self._check_compatible(other)
        out: dict[PauliString, complex] = {}
        for wa, ca in self._terms.items():
            for wb, cb in other._terms.items():
                w, phase = multiply(wa, wb)
                out[w] = out.get(w, 0.0) + ca * cb * phase
        return PauliSum(self.n_qubits, out)

    def adjoint(self) -> "PauliSum":
        return PauliSum(self.n_qubits, {w: c.conjugate() for w, c in self._terms.items()})

    def _check_compatible(self, other: "PauliSum"):
        if self.n_qubits != other.n_qubits:
            raise ValueError(f"qubit counts differ: {self.n_qubits} vs {other.n_qubits}")

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def is_anti_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return all(abs(c.real) <= tol for c in self._terms.values())

    def abs_coeff_sum(self) -> float:
        return float(sum(abs(c) for c in self._terms.values()))

    def terms_commute_pairwise(self) -> bool:
        words = list(self._terms)
        return all(
            words[i].commutes_with(words[j])
            for i in range(len(words))
            for j in range(i + 1, len(words))
        )

    def to_dense(self) -> np.ndarray:
        """Dense matrix in the computational basis; index bit k is qubit k."""
        dim = 1 << self.n_qubits
        if self.n_qubits > 14:
            raise ValueError("dense form limited to 14 qubits")
        mat = np.zeros((dim, dim), dtype=complex)
        cols = np.arange(dim)
        for word, coeff in self._terms.items():
            rows = cols ^ word.x_mask
            vals = coeff * _word_phase_vector(word, cols)
            mat[rows, cols] += vals
        return mat

    def __repr__(self) -> str:
        if not self._terms:
            return f"PauliSum({self.n_qubits}, 0)"
        parts = [f"({c:+.6g})*{w.label()}" for w, c in self.canonical_terms()[:6]]
        if len(self._terms) > 6:
            parts.append(f"... [{len(self._terms)} terms]")
        return " + ".join(parts)


_PARITY8 = np.array([bin(i).count("1") & 1 for i in range(256)], dtype=np.int8)


def _parity(values: np.ndarray) -> np.ndarray:
    """Bit parity of each entry (entries below 2^16)."""
    return _PARITY8[values & 0xFF] ^ _PARITY8[(values >> 8) & 0xFF]


def _word_phase_vector(word: PauliString, basis: np.ndarray) -> np.ndarray:
    """Diagonal phase of the word's action: P|b> = phase(b) |b ^ x_mask>."""
    y_phase = _PHASES[word.y_count() % 4]
    signs = 1.0 - 2.0 * _parity(np.bitwise_and(basis, word.z_mask)).astype(float)
    return y_phase * signs


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """ab - ba with like terms merged; exploits that word pairs either
    commute exactly (contribute nothing) or anticommute (contribute twice
    their product)."""
    a._check_compatible(b)
    out: dict[PauliString, complex] = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            if wa.commutes_with(wb):
                continue
            w, phase = multiply(wa, wb)
            out[w] = out.get(w, 0.0) + 2.0 * ca * cb * phase
    return PauliSum(a.n_qubits, out)


def spectral_norm(a: PauliSum, method: str = "auto") -> float:
    """Largest singular value of a Hermitian sum.

    ``exact_dense`` diagonalizes (n_qubits <= 14); ``upper_bound_abs_sum``
    returns the coefficient 1-norm, a triangle-inequality upper bound.
    ``auto`` picks exact_dense up to 10 qubits and the bound above that.
    """
    if not a.is_hermitian():
        raise ValueError("spectral_norm requires a Hermitian sum")
    if method == "auto":
        method = "exact_dense" if a.n_qubits <= 10 else "upper_bound_abs_sum"
    if method == "upper_bound_abs_sum":
        return a.abs_coeff_sum()
    if method == "exact_dense":
        if a.n_qubits > 14:
            raise ValueError("exact_dense spectral norm limited to 14 qubits")
        if not a.terms:
            return 0.0
        eigs = np.linalg.eigvalsh(a.to_dense())
        return float(np.max(np.abs(eigs)))
    raise ValueError(f"unknown method {method!r}")


def double_commutator(h: PauliSum, a: PauliSum) -> PauliSum:
    """[[h, a], a]; its expectation value is minus the curvature of the
    energy along e^{i eta a} at eta = 0."""
    if not h.is_hermitian() or not a.is_hermitian():
        raise ValueError("double_commutator expects Hermitian inputs")
    return commutator(commutator(h, a), a)
