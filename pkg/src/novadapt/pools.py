"""Operator pools for adaptive state preparation.

Three families:

* spin-adapted fermionic singles and doubles over spatial orbitals,
  preserving particle number and spin polarization (generators are
  normalized to unit spectral norm, which fixes the update-magnitude
  convention and makes gradient magnitudes comparable across the pool);
* the qubit pool of individual Pauli words obtained by stripping the
  Z-strings off Jordan-Wigner images of one- and two-body differences;
* raw one- and two-body anti-Hermitian differences (unnormalized), the
  generator basis used by the contracted-equation baseline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .fermions import FermionTerm, jordan_wigner_sum
from .pauli import PauliString, PauliSum, spectral_norm

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PoolOperator:
    """Hermitian traceless generator with provenance metadata."""

    label: str
    kind: str
    generator: PauliSum
    norm: float | None = None
    commuting_terms: bool = False

    def __post_init__(self):
        if not self.generator.is_hermitian():
            raise ValueError(f"pool generator {self.label} is not Hermitian")
        if any(w.is_identity for w in self.generator.terms):
            raise ValueError(f"pool generator {self.label} has an identity component")


def _hermitian_from_antihermitian(tau: PauliSum) -> PauliSum:
    """A = -i tau; tau must be anti-Hermitian so that A is Hermitian."""
    if not tau.is_anti_hermitian():
        raise ValueError("expected an anti-Hermitian sum")
    a = (-1j) * tau
    # clean numerically-zero imaginary residues so coefficients are real
    return PauliSum(tau.n_qubits, {w: complex(c.real, 0.0) for w, c in a.terms.items()})


def _difference(terms: list[FermionTerm], n_modes: int) -> PauliSum:
    """JW image of sum(terms) - h.c. as a Hermitian generator (-i tau)."""
    tau = jordan_wigner_sum(terms + [t.adjoint() * -1 for t in terms], n_modes)
    return _hermitian_from_antihermitian(tau)


def _alpha(p: int) -> int:
    return 2 * p


def _beta(p: int) -> int:
    return 2 * p + 1


def _pair_components(p: int, q: int, symmetry: str) -> list[tuple[float, tuple[int, int]]]:
    """Creation-pair expansions a^dag a^dag for two-electron spin states."""
    if symmetry == "T1":
        return [(1.0, (_alpha(p), _alpha(q)))]
    if symmetry == "T-1":
        return [(1.0, (_beta(p), _beta(q)))]
    if symmetry == "T0":
        return [(1 / _SQRT2, (_alpha(p), _beta(q))), (1 / _SQRT2, (_beta(p), _alpha(q)))]
    if symmetry == "S0":
        return [(1 / _SQRT2, (_alpha(p), _beta(q))), (-1 / _SQRT2, (_beta(p), _alpha(q)))]
    raise ValueError(symmetry)


def _double_terms(pq: tuple[int, int], rs: tuple[int, int], components: list[str]) -> list[FermionTerm]:
    terms = []
    for sym in components:
        for c_up, (i1, i2) in _pair_components(*pq, sym):
            for c_dn, (j1, j2) in _pair_components(*rs, sym):
                terms.append(FermionTerm.build((i1, i2), (j2, j1), c_up * c_dn))
    return [t for t in terms if not t.is_zero]


def _normalized(label: str, kind: str, generator: PauliSum) -> PoolOperator | None:
    if not generator.terms:
        return None
    norm = spectral_norm(generator, "exact_dense")
    scaled = (1.0 / norm) * generator
    return PoolOperator(label, kind, scaled, norm=1.0, commuting_terms=scaled.terms_commute_pairwise())


@lru_cache(maxsize=8)
def build_spin_adapted_pool(n_spatial_orbitals: int) -> tuple[PoolOperator, ...]:
    """Spin-adapted singles over spatial pairs a<b plus singlet/triplet
    doubles over distinct spatial index pairs, as unit-norm Hermitian
    generators; every generator commutes with total N and S_z."""
    if n_spatial_orbitals < 2:
        raise ValueError("need at least 2 spatial orbitals")
    if n_spatial_orbitals > 7:
        raise ValueError("dense normalization limits the pool builder to 7 spatial orbitals")
    n_modes = 2 * n_spatial_orbitals
    ops: list[PoolOperator] = []

    for a, b in itertools.combinations(range(n_spatial_orbitals), 2):
        terms = [
            FermionTerm.build((_alpha(a),), (_alpha(b),)),
            FermionTerm.build((_beta(a),), (_beta(b),)),
        ]
        op = _normalized(f"s_{a}.{b}", "spin_adapted_single", _difference(terms, n_modes))
        if op:
            ops.append(op)

    strict_pairs = list(itertools.combinations(range(n_spatial_orbitals), 2))
    for pq, rs in itertools.combinations(strict_pairs, 2):
        terms = _double_terms(pq, rs, ["T1", "T-1", "T0"])
        op = _normalized(
            f"dT_{pq[0]}{pq[1]}.{rs[0]}{rs[1]}", "spin_adapted_double_T", _difference(terms, n_modes)
        )
        if op:
            ops.append(op)

    loose_pairs = list(itertools.combinations_with_replacement(range(n_spatial_orbitals), 2))
    for pq, rs in itertools.combinations(loose_pairs, 2):
        terms = _double_terms(pq, rs, ["S0"])
        op = _normalized(
            f"dS_{pq[0]}{pq[1]}.{rs[0]}{rs[1]}", "spin_adapted_double_S", _difference(terms, n_modes)
        )
        if op:
            ops.append(op)

    return tuple(ops)


def _strip_z_string(word: PauliString) -> PauliString:
    # drop pure-Z components; X and Y survive
    return PauliString(word.n_qubits, word.x_mask, word.z_mask & word.x_mask)


@lru_cache(maxsize=8)
def build_qubit_pool(n_qubits: int) -> tuple[PoolOperator, ...]:
    """Deduplicated odd-Y Pauli words from Z-stripped JW images of all
    one- and two-body differences, each a unit-coefficient generator."""
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    words: set[PauliString] = set()
    taus: list[PauliSum] = []
    for p, q in itertools.combinations(range(n_qubits), 2):
        taus.append(_difference([FermionTerm.build((p,), (q,))], n_qubits))
    pairs = list(itertools.combinations(range(n_qubits), 2))
    for pq, rs in itertools.combinations(pairs, 2):
        terms = [FermionTerm.build(pq, (rs[1], rs[0]))]
        taus.append(_difference(terms, n_qubits))
    for tau in taus:
        for word in tau.terms:
            stripped = _strip_z_string(word)
            if stripped.y_count() % 2 != 1:
                raise ValueError("stripped qubit-pool word has even Y count")
            words.add(stripped)
    ordered = sorted(words, key=lambda w: (w.x_mask, w.z_mask))
    return tuple(
        PoolOperator(
            f"w_{w.label().replace(' ', '')}",
            "qubit_pauli",
            PauliSum(n_qubits, [(w, 1.0)]),
            norm=1.0,
            commuting_terms=True,
        )
        for w in ordered
    )


@lru_cache(maxsize=8)
def build_one_two_body_pool(n_modes: int) -> tuple[PoolOperator, ...]:
    """All one- and two-body anti-Hermitian differences t - t^dag as
    unnormalized Hermitian generators -i(t - t^dag)."""
    ops: list[PoolOperator] = []
    for p, q in itertools.combinations(range(n_modes), 2):
        gen = _difference([FermionTerm.build((p,), (q,))], n_modes)
        if gen.terms:
            ops.append(PoolOperator(f"b1_{p}.{q}", "one_body", gen, norm=None,
                                    commuting_terms=gen.terms_commute_pairwise()))
    pairs = list(itertools.combinations(range(n_modes), 2))
    for pq, rs in itertools.combinations(pairs, 2):
        gen = _difference([FermionTerm.build(pq, (rs[1], rs[0]))], n_modes)
        if gen.terms:
            ops.append(
                PoolOperator(
                    f"b2_{pq[0]}{pq[1]}.{rs[0]}{rs[1]}", "two_body", gen, norm=None,
                    commuting_terms=gen.terms_commute_pairwise(),
                )
            )
    return tuple(ops)


def dump_pool(ops: tuple[PoolOperator, ...] | list[PoolOperator], path) -> None:
    """One operator per line: label | kind | norm | coeff*word terms."""
    lines = []
    for op in ops:
        terms = " ; ".join(f"{c.real!r} {w.word()}" for w, c in op.generator.canonical_terms())
        lines.append(f"{op.label} | {op.kind} | {op.norm!r} | {terms}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_pool(path) -> tuple[PoolOperator, ...]:
    ops = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            label, kind, norm_s, terms_s = (part.strip() for part in line.split("|"))
            terms = []
            n_qubits = None
            for chunk in terms_s.split(";"):
                coeff_s, word_s = chunk.split()
                word = PauliString.from_word(word_s)
                n_qubits = word.n_qubits
                terms.append((word, float(coeff_s)))
            generator = PauliSum(n_qubits, terms)
            norm = None if norm_s == "None" else float(norm_s)
            ops.append(
                PoolOperator(label, kind, generator, norm=norm,
                             commuting_terms=generator.terms_commute_pairwise())
            )
    return tuple(ops)
