"""Result buffers: per-circuit children collected under one parent.

A `ResultBuffer` owns the results of one batch: a register width, ordered
`ChildResult` records keyed by circuit name, and free-form metadata.
`merge` stitches per-worker buffers back into global batch order using
their (start, end) index ranges.

Text form (line-oriented, `serialize`/`deserialize` round-trip exactly):

    qvirt-buffer v1
    nqubits <n>
    meta <key> <json scalar>          # zero or more
    child <name>                      # one block per child, batch order
    shots <int>                       # present when sampled
    expectation <float>               # present when computed
    count <bitstring> <int>           # sorted by bitstring
    prob <bitstring> <float>          # sorted by bitstring

Floats are written with repr-precision (17 significant digits) so parsing
recovers the exact double.  Child names may contain spaces but not
newlines; metadata keys are word characters, dots, and dashes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable

_FORMAT_HEADER = "qvirt-buffer v1"
_META_KEY = re.compile(r"[A-Za-z0-9_.\-]+\Z")
_BITS = re.compile(r"[01]+\Z")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


@dataclass
class ChildResult:
    """Result of one circuit: counts and/or an expectation or a distribution.

    `counts` maps bitstrings to shot tallies (`shots` is their sum);
    `distribution` holds exact outcome probabilities when no sampling
    happened; `expectation` a scalar estimate.  Any subset may be present.
    """

    name: str
    counts: dict[str, int] = field(default_factory=dict)
    expectation: float | None = None
    shots: int = 0
    distribution: dict[str, float] | None = None

    def validate(self, n_qubits: int) -> None:
        if not self.name or "\n" in self.name:
            raise ValueError("child name must be a nonempty single line")
        for table, kind in ((self.counts, "count"), (self.distribution or {}, "prob")):
            for bits in table:
                if len(bits) != n_qubits or not _BITS.match(bits):
                    raise ValueError(f"bad {kind} key {bits!r} for {n_qubits} qubits")
        if self.counts:
            if any(c <= 0 for c in self.counts.values()):
                raise ValueError("counts must be positive")
            if sum(self.counts.values()) != self.shots:
                raise ValueError("shots must equal the sum of counts")
        elif self.shots < 0:
            raise ValueError("shots must be nonnegative")
        if self.distribution is not None:
            total = sum(self.distribution.values())
            if any(p <= 0.0 for p in self.distribution.values()):
                raise ValueError("probabilities must be positive")
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"probabilities sum to {total!r}, not 1")


@dataclass
class ResultBuffer:
    """Ordered child results for one batch, all on the same register width."""

    n_qubits: int
    children: list[ChildResult] = field(default_factory=list)
    metadata: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")

    def child_names(self) -> list[str]:
        return [c.name for c in self.children]

    def child(self, name: str) -> ChildResult:
        for c in self.children:
            if c.name == name:
                return c
        raise KeyError(name)

    def append_child(self, child: ChildResult) -> None:
        """Validate and append; child names must be unique within a buffer."""
        child.validate(self.n_qubits)
        if any(c.name == child.name for c in self.children):
            raise ValueError(f"duplicate child name {child.name!r}")
        self.children.append(child)


def merge(target: ResultBuffer, tagged_locals: Iterable[tuple[tuple[int, int], ResultBuffer]]) -> ResultBuffer:
    """Append per-worker children to `target` in global batch order.

    Each local buffer is tagged with its (start, end) slice of the batch;
    the slices must tile 0..total with no gaps or overlaps and each local
    must hold exactly end - start children.
    """
    tagged = sorted(tagged_locals, key=lambda pair: pair[0])
    cursor = 0
    for (start, end), local in tagged:
        if start != cursor or end < start:
            raise ValueError(f"ranges must tile the batch; got ({start}, {end}) at offset {cursor}")
        if local.n_qubits != target.n_qubits:
            raise ValueError(f"register mismatch: {local.n_qubits} vs {target.n_qubits}")
        if len(local.children) != end - start:
            raise ValueError(f"range ({start}, {end}) holds {len(local.children)} children")
        cursor = end
    for (_, _), local in tagged:
        for child in local.children:
            target.append_child(child)
    return target


def serialize(buffer: ResultBuffer) -> str:
    """Render to the text form in the module docstring."""
    lines = [_FORMAT_HEADER, f"nqubits {buffer.n_qubits}"]
    for key in sorted(buffer.metadata):
        if not _META_KEY.match(key):
            raise ValueError(f"bad metadata key {key!r}")
        value = buffer.metadata[key]
        if not isinstance(value, (str, int, float, bool)):
            raise ValueError(f"metadata {key!r} must be a scalar")
        lines.append(f"meta {key} {json.dumps(value)}")
    for child in buffer.children:
        child.validate(buffer.n_qubits)
        lines.append(f"child {child.name}")
        if child.shots:
            lines.append(f"shots {child.shots}")
        if child.expectation is not None:
            lines.append(f"expectation {_fmt(child.expectation)}")
        for bits in sorted(child.counts):
            lines.append(f"count {bits} {child.counts[bits]}")
        if child.distribution is not None:
            for bits in sorted(child.distribution):
                lines.append(f"prob {bits} {_fmt(child.distribution[bits])}")
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> ResultBuffer:
    """Parse the text form back; inverse of `serialize`."""
    lines = text.splitlines()
    if not lines or lines[0] != _FORMAT_HEADER:
        raise ValueError(f"expected header {_FORMAT_HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("nqubits "):
        raise ValueError("expected nqubits after the header")
    buffer = ResultBuffer(n_qubits=int(lines[1].split()[1]))
    current: ChildResult | None = None
    for lineno, line in enumerate(lines[2:], start=3):
        word, _, rest = line.partition(" ")
        if word == "meta":
            if current is not None:
                raise ValueError(f"line {lineno}: meta after first child")
            key, _, payload = rest.partition(" ")
            if not _META_KEY.match(key) or not payload:
                raise ValueError(f"line {lineno}: bad meta line")
            if key in buffer.metadata:
                raise ValueError(f"line {lineno}: duplicate meta key {key!r}")
            buffer.metadata[key] = json.loads(payload)
        elif word == "child":
            if current is not None:
                buffer.append_child(current)
            current = ChildResult(name=rest)
        elif current is None:
            raise ValueError(f"line {lineno}: {word!r} before any child")
        elif word == "shots":
            current.shots = int(rest)
        elif word == "expectation":
            current.expectation = float(rest)
        elif word == "count":
            bits, _, tally = rest.partition(" ")
            if bits in current.counts:
                raise ValueError(f"line {lineno}: duplicate count key")
            current.counts[bits] = int(tally)
        elif word == "prob":
            bits, _, p = rest.partition(" ")
            if current.distribution is None:
                current.distribution = {}
            if bits in current.distribution:
                raise ValueError(f"line {lineno}: duplicate prob key")
            current.distribution[bits] = float(p)
        else:
            raise ValueError(f"line {lineno}: unrecognized record {word!r}")
    if current is not None:
        buffer.append_child(current)
    return buffer
