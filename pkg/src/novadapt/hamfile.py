"""Hamiltonian text files: header plus one Pauli term per line.

Format::

    # comment
    n_qubits 8
    n_electrons 4
    orbital_ordering interleaved
    energy_offset 0.0
    terms
    -0.92094 IIIIIIII 0
    +0.11933 ZIIIIIII 1
    ...

Character k of a word is qubit k.  The trailing body tag records the
fermionic origin of the term (0 identity offset, 1 one-body, 2 two-body)
so the feedback baseline can split the Hamiltonian without any
electronic-structure code.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from importlib import resources

from .pauli import PauliString, PauliSum
from .states import StateVector, hartree_fock_state

log = logging.getLogger(__name__)

_HEADER_FIELDS = ("n_qubits", "n_electrons", "orbital_ordering", "energy_offset")

BUNDLED_H4 = "h4_sto3g_1p5"


@dataclass(frozen=True)
class LoadedHamiltonian:
    operator: PauliSum
    n_qubits: int
    n_electrons: int
    orbital_ordering: str
    energy_offset: float
    body_tags: tuple[tuple[PauliString, int], ...]
    checksum: str
    source: str

    @property
    def term_count(self) -> int:
        return len(self.body_tags)

    def tags_as_dict(self) -> dict[PauliString, int]:
        return dict(self.body_tags)

    def hartree_fock(self) -> StateVector:
        return hartree_fock_state(self.n_qubits, self.n_electrons)


def bundled_hamiltonian_path(name: str = BUNDLED_H4) -> str:
    return str(resources.files("novadapt").joinpath(f"data/{name}.ham"))


class HamiltonianFormatError(ValueError):
    pass


def parse_hamiltonian_text(text: str, source: str = "<string>") -> LoadedHamiltonian:
    header: dict[str, str] = {}
    terms: list[tuple[float, PauliString, int]] = []
    in_terms = False
    n_qubits = None
    identity_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not in_terms:
            if line == "terms":
                missing = [f for f in _HEADER_FIELDS if f not in header]
                if missing:
                    raise HamiltonianFormatError(f"{source}:{lineno}: missing header fields {missing}")
                n_qubits = int(header["n_qubits"])
                in_terms = True
                continue
            parts = line.split(maxsplit=1)
            if len(parts) != 2 or parts[0] not in _HEADER_FIELDS:
                raise HamiltonianFormatError(f"{source}:{lineno}: unknown header line {line!r}")
            header[parts[0]] = parts[1]
            continue
        parts = line.split()
        if len(parts) != 3:
            raise HamiltonianFormatError(f"{source}:{lineno}: expected 'coefficient word tag', got {line!r}")
        coeff_s, word_s, tag_s = parts
        try:
            coeff = float(coeff_s)
        except ValueError:
            raise HamiltonianFormatError(f"{source}:{lineno}: bad coefficient {coeff_s!r}") from None
        if coeff != coeff or coeff in (float("inf"), float("-inf")):
            raise HamiltonianFormatError(f"{source}:{lineno}: non-finite coefficient")
        if len(word_s) != n_qubits:
            raise HamiltonianFormatError(
                f"{source}:{lineno}: word length {len(word_s)} does not match n_qubits {n_qubits}"
            )
        try:
            word = PauliString.from_word(word_s)
        except ValueError as exc:
            raise HamiltonianFormatError(f"{source}:{lineno}: {exc}") from None
        if tag_s not in ("0", "1", "2"):
            raise HamiltonianFormatError(f"{source}:{lineno}: body tag must be 0, 1 or 2")
        if word.is_identity:
            if identity_seen:
                raise HamiltonianFormatError(f"{source}:{lineno}: more than one identity term")
            identity_seen = True
        terms.append((coeff, word, int(tag_s)))
    if not in_terms:
        raise HamiltonianFormatError(f"{source}: no 'terms' section")
    if not terms:
        raise HamiltonianFormatError(f"{source}: empty term section")
    operator = PauliSum(n_qubits, [(w, c) for c, w, _ in terms])
    if len(operator) != len(terms):
        raise HamiltonianFormatError(f"{source}: duplicate or vanishing terms")
    checksum = hashlib.sha256(text.encode()).hexdigest()
    loaded = LoadedHamiltonian(
        operator=operator,
        n_qubits=n_qubits,
        n_electrons=int(header["n_electrons"]),
        orbital_ordering=header["orbital_ordering"],
        energy_offset=float(header["energy_offset"]),
        body_tags=tuple((w, t) for _, w, t in terms),
        checksum=checksum,
        source=source,
    )
    log.info("parsed %s: %d terms, sha256 %s", source, loaded.term_count, checksum[:16])
    return loaded


def parse_hamiltonian(path: str) -> LoadedHamiltonian:
    with open(path) as fh:
        return parse_hamiltonian_text(fh.read(), source=str(path))


def load_bundled(name: str = BUNDLED_H4) -> LoadedHamiltonian:
    return parse_hamiltonian(bundled_hamiltonian_path(name))


def serialize_hamiltonian(loaded: LoadedHamiltonian) -> str:
    lines = [
        f"n_qubits {loaded.n_qubits}",
        f"n_electrons {loaded.n_electrons}",
        f"orbital_ordering {loaded.orbital_ordering}",
        f"energy_offset {loaded.energy_offset!r}",
        "terms",
    ]
    tags = loaded.tags_as_dict()
    for word, coeff in loaded.operator.canonical_terms():
        lines.append(f"{coeff.real!r} {word.word()} {tags[word]}")
    return "\n".join(lines) + "\n"
