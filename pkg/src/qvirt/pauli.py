"""Pauli observables and the exciton-model Hamiltonian.

An `Observable` is a constant plus a weighted sum of `PauliTerm`s, where a
term is a product of single-qubit X/Y/Z factors.  The text form accepted by
`parse_pauli` is one term per line, `coefficient FACTOR FACTOR ...`, with
factors like `X0` or `Z12` (`I` for the identity term) and `#` comments.

`aiem_hamiltonian` builds the two-level exciton Hamiltonian on an open
linear chain of monomers: a constant offset, X and Z on every site, and
XX/XZ/ZX/ZZ on every adjacent pair.  Its coefficient file format is one
value per line:

    E v
    X A v
    Z A v
    XX A B v
    XZ A B v
    ZX A B v
    ZZ A B v

with A a site index, B = A + 1, and v a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .circuits import Circuit, Gate, h, measure_all

_LETTERS = ("X", "Y", "Z")


@dataclass(frozen=True)
class PauliTerm:
    """A weighted product of single-qubit Pauli factors on distinct qubits.

    `factors` is stored sorted by qubit; an empty tuple is the identity.
    """

    factors: tuple[tuple[int, str], ...] = ()
    coefficient: float = 1.0

    def __post_init__(self) -> None:
        ordered = tuple(sorted((int(q), letter) for q, letter in self.factors))
        object.__setattr__(self, "factors", ordered)
        object.__setattr__(self, "coefficient", float(self.coefficient))
        qubits = [q for q, _ in ordered]
        if any(q < 0 for q in qubits):
            raise ValueError(f"negative qubit index in {ordered}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {ordered}")
        for _, letter in ordered:
            if letter not in _LETTERS:
                raise ValueError(f"unknown Pauli letter {letter!r}")

    @property
    def min_qubits(self) -> int:
        """Smallest register size this term fits on."""
        return max((q for q, _ in self.factors), default=-1) + 1

    def factors_text(self) -> str:
        """Factor product as text, e.g. 'X0 Z3'; 'I' for the identity."""
        if not self.factors:
            return "I"
        return " ".join(f"{letter}{q}" for q, letter in self.factors)

    def __str__(self) -> str:
        return f"{self.coefficient:g} {self.factors_text()}"


def pauli(factors: Mapping[int, str] | Iterable[tuple[int, str]], coefficient: float = 1.0) -> PauliTerm:
    """Build a PauliTerm from {qubit: letter} or (qubit, letter) pairs."""
    items = factors.items() if isinstance(factors, Mapping) else factors
    return PauliTerm(tuple(items), coefficient)


@dataclass(frozen=True)
class Observable:
    """A constant plus a sum of Pauli terms with no repeated factor products."""

    terms: tuple[PauliTerm, ...] = ()
    constant: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "constant", float(self.constant))
        keys = [t.factors for t in self.terms]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate factor products; combine coefficients first")

    @property
    def min_qubits(self) -> int:
        return max((t.min_qubits for t in self.terms), default=0)

    def __str__(self) -> str:
        lines = [f"{self.constant:g} I"] if self.constant else []
        lines.extend(str(t) for t in self.terms)
        return "\n".join(lines) if lines else "0 I"


def combine(terms: Iterable[PauliTerm], constant: float = 0.0) -> Observable:
    """Sum terms into an Observable, merging equal factor products."""
    acc: dict[tuple[tuple[int, str], ...], float] = {}
    order: list[tuple[tuple[int, str], ...]] = []
    const = float(constant)
    for term in terms:
        if not term.factors:
            const += term.coefficient
            continue
        if term.factors not in acc:
            acc[term.factors] = 0.0
            order.append(term.factors)
        acc[term.factors] += term.coefficient
    return Observable(tuple(PauliTerm(k, acc[k]) for k in order), const)


def parse_pauli(text: str) -> Observable:
    """Parse the line-oriented observable format described in the module docstring."""
    terms: list[PauliTerm] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            coefficient = float(tokens[0])
        except ValueError:
            raise ValueError(f"line {lineno}: bad coefficient {tokens[0]!r}") from None
        factors: list[tuple[int, str]] = []
        for token in tokens[1:]:
            if token == "I":
                continue
            letter, index = token[:1], token[1:]
            if letter not in _LETTERS or not index.isdigit():
                raise ValueError(f"line {lineno}: bad factor {token!r}")
            factors.append((int(index), letter))
        try:
            terms.append(PauliTerm(tuple(factors), coefficient))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return combine(terms)


def measurement_basis_circuit(term: PauliTerm, n_qubits: int, name: str | None = None) -> Circuit:
    """Basis-change circuit mapping `term`'s eigenbasis onto Z measurements.

    X factors get a Hadamard before MeasureAll; Z factors need nothing.
    Y is not in the supported gate set and is rejected.
    """
    if term.min_qubits > n_qubits:
        raise ValueError(f"term on qubit {term.min_qubits - 1} exceeds {n_qubits} qubits")
    gates: list[Gate] = []
    for q, letter in term.factors:
        if letter == "Y":
            raise ValueError("no basis-change gates for Y factors")
        if letter == "X":
            gates.append(h(q))
    gates.append(measure_all())
    return Circuit(n_qubits, tuple(gates), name=name or f"measure {term.factors_text()}")


def expectation_from_counts(counts: Mapping[str, float], term: PauliTerm) -> float:
    """Estimate a Pauli expectation from measured bitstring frequencies.

    Assumes counts were taken after the term's basis change, so each factor
    contributes its Z eigenvalue: +1 for bit '0', -1 for bit '1'.  Accepts
    raw counts or normalized probabilities.
    """
    if not counts:
        raise ValueError("empty counts")
    needed = term.min_qubits
    total = 0.0
    acc = 0.0
    for bits, weight in counts.items():
        if len(bits) < needed:
            raise ValueError(f"bitstring {bits!r} shorter than term support {needed}")
        parity = sum(bits[q] == "1" for q, _ in term.factors) & 1
        total += weight
        acc += -weight if parity else weight
    if total <= 0:
        raise ValueError("counts sum to zero")
    return acc / total


@dataclass(frozen=True)
class AiemCoefficients:
    """Exciton-model coefficients for an open chain of `n` monomers.

    One-body arrays have length n; pair arrays length n - 1, entry A for
    the bond (A, A + 1).
    """

    energy_offset: float
    x: tuple[float, ...]
    z: tuple[float, ...]
    xx: tuple[float, ...]
    xz: tuple[float, ...]
    zx: tuple[float, ...]
    zz: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("x", "z", "xx", "xz", "zx", "zz"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        n = len(self.x)
        if n < 2:
            raise ValueError("need at least two monomers")
        if len(self.z) != n:
            raise ValueError("x and z must have equal length")
        for name in ("xx", "xz", "zx", "zz"):
            if len(getattr(self, name)) != n - 1:
                raise ValueError(f"{name} must have length n - 1 = {n - 1}")

    @property
    def n_monomers(self) -> int:
        return len(self.x)


def random_aiem_coefficients(n_monomers: int, seed: int) -> AiemCoefficients:
    """Draw all coefficients uniformly from [-1, 1) with a PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    one = rng.uniform(-1.0, 1.0, size=(2, n_monomers))
    two = rng.uniform(-1.0, 1.0, size=(4, n_monomers - 1))
    offset = float(rng.uniform(-1.0, 1.0))
    return AiemCoefficients(offset, tuple(one[0]), tuple(one[1]),
                            tuple(two[0]), tuple(two[1]), tuple(two[2]), tuple(two[3]))


def aiem_hamiltonian(coefficients: AiemCoefficients) -> Observable:
    """Assemble the chain Hamiltonian: 2n one-body plus 4(n-1) pair terms."""
    n = coefficients.n_monomers
    terms: list[PauliTerm] = []
    for a in range(n):
        terms.append(pauli({a: "X"}, coefficients.x[a]))
        terms.append(pauli({a: "Z"}, coefficients.z[a]))
    for a in range(n - 1):
        b = a + 1
        terms.append(pauli({a: "X", b: "X"}, coefficients.xx[a]))
        terms.append(pauli({a: "X", b: "Z"}, coefficients.xz[a]))
        terms.append(pauli({a: "Z", b: "X"}, coefficients.zx[a]))
        terms.append(pauli({a: "Z", b: "Z"}, coefficients.zz[a]))
    return Observable(tuple(terms), coefficients.energy_offset)


def measurable_term_count(n_monomers: int) -> int:
    """Number of non-constant Hamiltonian terms: 6n - 4 on an open chain."""
    if n_monomers < 2:
        raise ValueError("need at least two monomers")
    return 6 * n_monomers - 4


def dump_aiem_coefficients(coefficients: AiemCoefficients) -> str:
    """Serialize to the coefficient file format (module docstring)."""
    lines = [f"E {coefficients.energy_offset!r}"]
    n = coefficients.n_monomers
    for a in range(n):
        lines.append(f"X {a} {coefficients.x[a]!r}")
        lines.append(f"Z {a} {coefficients.z[a]!r}")
    for a in range(n - 1):
        lines.append(f"XX {a} {a + 1} {coefficients.xx[a]!r}")
        lines.append(f"XZ {a} {a + 1} {coefficients.xz[a]!r}")
        lines.append(f"ZX {a} {a + 1} {coefficients.zx[a]!r}")
        lines.append(f"ZZ {a} {a + 1} {coefficients.zz[a]!r}")
    return "\n".join(lines) + "\n"


def load_aiem_coefficients(text: str) -> AiemCoefficients:
    """Parse the coefficient file format; every entry must be present exactly once."""
    offset: float | None = None
    one: dict[str, dict[int, float]] = {"X": {}, "Z": {}}
    two: dict[str, dict[int, float]] = {"XX": {}, "XZ": {}, "ZX": {}, "ZZ": {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        try:
            if kind == "E" and len(tokens) == 2:
                if offset is not None:
                    raise ValueError("duplicate E")
                offset = float(tokens[1])
            elif kind in one and len(tokens) == 3:
                a = int(tokens[1])
                if a in one[kind]:
                    raise ValueError(f"duplicate {kind} {a}")
                one[kind][a] = float(tokens[2])
            elif kind in two and len(tokens) == 4:
                a, b = int(tokens[1]), int(tokens[2])
                if b != a + 1:
                    raise ValueError(f"{kind} bond must be adjacent, got {a} {b}")
                if a in two[kind]:
                    raise ValueError(f"duplicate {kind} {a} {b}")
                two[kind][a] = float(tokens[3])
            else:
                raise ValueError(f"unrecognized entry {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if offset is None:
        raise ValueError("missing E entry")
    n = max(one["X"], default=-1) + 1
    if n < 2:
        raise ValueError("need at least two monomers")
    for kind, want in (("X", n), ("Z", n)):
        if sorted(one[kind]) != list(range(want)):
            raise ValueError(f"{kind} entries must cover sites 0..{want - 1}")
    for kind in two:
        if sorted(two[kind]) != list(range(n - 1)):
            raise ValueError(f"{kind} entries must cover bonds 0..{n - 2}")
    return AiemCoefficients(
        offset,
        tuple(one["X"][a] for a in range(n)),
        tuple(one["Z"][a] for a in range(n)),
        tuple(two["XX"][a] for a in range(n - 1)),
        tuple(two["XZ"][a] for a in range(n - 1)),
        tuple(two["ZX"][a] for a in range(n - 1)),
        tuple(two["ZZ"][a] for a in range(n - 1)),
    )
