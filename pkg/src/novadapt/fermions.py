"""Symbolic fermionic operators and their Jordan-Wigner images.

Spin-orbitals are indexed 0..n-1 and map to qubits of the same index.
The interleaved ordering convention (alpha on even, beta on odd indices)
is fixed here and declared in Hamiltonian file headers so that operator
pools and Hamiltonians always agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliString, PauliSum


def _canonical_order(indices: tuple[int, ...]) -> tuple[tuple[int, ...], int] | None:
    """Sort a ladder-index list, tracking the permutation sign; None if a
    repeated index annihilates the product."""
    items = list(indices)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(items)):
        if items[i - 1] == items[i]:
            return None
    return tuple(items), sign


@dataclass(frozen=True)
class FermionTerm:
    """coefficient * a^dag_{p1} ... a^dag_{pk} a_{q1} ... a_{ql},
    normal ordered with strictly increasing index lists."""

    creations: tuple[int, ...]
    annihilations: tuple[int, ...]
    coefficient: complex = 1.0 + 0.0j

    @classmethod
    def build(cls, creations, annihilations, coefficient=1.0) -> "FermionTerm":
        """Canonicalize index order; duplicate indices yield the zero term."""
        cr = _canonical_order(tuple(creations))
        an = _canonical_order(tuple(annihilations))
        if cr is None or an is None:
            return cls((), (), 0.0)
        return cls(cr[0], an[0], complex(coefficient) * cr[1] * an[1])

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def adjoint(self) -> "FermionTerm":
        return FermionTerm.build(
            tuple(reversed(self.annihilations)),
            tuple(reversed(self.creations)),
            self.coefficient.conjugate(),
        )

    def __mul__(self, factor: complex) -> "FermionTerm":
        return FermionTerm(self.creations, self.annihilations, self.coefficient * factor)

    __rmul__ = __mul__

    def max_index(self) -> int:
        return max(self.creations + self.annihilations, default=-1)


def _ladder_image(index: int, n_modes: int, dagger: bool) -> PauliSum:
    # a_p   = Z_0..Z_{p-1} (X_p + iY_p)/2
    # a^dag = Z_0..Z_{p-1} (X_p - iY_p)/2
    zstring = (1 << index) - 1
    x_word = PauliString(n_modes, 1 << index, zstring)
    y_word = PauliString(n_modes, 1 << index, zstring | (1 << index))
    y_coeff = -0.5j if dagger else 0.5j
    return PauliSum(n_modes, [(x_word, 0.5), (y_word, y_coeff)])


def jordan_wigner(term: FermionTerm, n_modes: int) -> PauliSum:
    """Pauli expansion of one normal-ordered fermionic term."""
    if term.is_zero:
        return PauliSum.zero(n_modes)
    if term.max_index() >= n_modes:
        raise ValueError(f"mode index {term.max_index()} out of range for {n_modes} modes")
    out = PauliSum(n_modes, [(PauliString.identity(n_modes), term.coefficient)])
    for p in term.creations:
        out = out @ _ladder_image(p, n_modes, dagger=True)
    for q in term.annihilations:
        out = out @ _ladder_image(q, n_modes, dagger=False)
    return out


def jordan_wigner_sum(terms: list[FermionTerm], n_modes: int) -> PauliSum:
    out = PauliSum.zero(n_modes)
    for term in terms:
        out = out + jordan_wigner(term, n_modes)
    return out


def excitation_difference(creations, annihilations, n_modes: int) -> PauliSum:
    """Anti-Hermitian t - t^dag for t = a^dag... a..., as a PauliSum."""
    t = FermionTerm.build(creations, annihilations)
    return jordan_wigner(t, n_modes) - jordan_wigner(t.adjoint(), n_modes)


def number_operator(n_modes: int) -> PauliSum:
    terms = [FermionTerm.build((p,), (p,)) for p in range(n_modes)]
    return jordan_wigner_sum(terms, n_modes)


def sz_operator(n_modes: int) -> PauliSum:
    """Total spin polarization under the interleaved (alpha even, beta odd)
    ordering: (N_alpha - N_beta) / 2."""
    terms = [
        FermionTerm.build((p,), (p,), 0.5 if p % 2 == 0 else -0.5)
        for p in range(n_modes)
    ]
    return jordan_wigner_sum(terms, n_modes)
