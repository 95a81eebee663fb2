"""Shared parameter-shift machinery for the gradient workloads.

Both workloads evaluate their loss at theta[k] +- pi/2 for every k and take
half the difference.  Because each circuit parameter feeds exactly one
rotation gate (merged angles count as one gate), the shift rule gives the
exact derivative of expectation-valued losses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .circuits import Circuit, bind

SHIFT = math.pi / 2

# Tag order fixes the batch layout: for parameter k, the +shift circuit
# always directly precedes the -shift circuit.
SHIFT_TAGS = ((1.0, "+"), (-1.0, "-"))


@dataclass(frozen=True)
class GradientReport:
    """One gradient evaluation: the vector, its cost, and its duration."""

    gradient: tuple[float, ...]
    n_circuit_executions: int
    wall_time_s: float


def shifted_circuits(template: Circuit, theta: Sequence[float]) -> Iterator[tuple[int, str, Circuit]]:
    """Yield (parameter index, shift tag, bound circuit) for theta[k] +- pi/2.

    Order is k-major with '+' before '-', matching how gradient assemblers
    index the resulting result-buffer children.
    """
    values = [float(v) for v in theta]
    if len(values) != len(template.params):
        raise ValueError(f"expected {len(template.params)} angles, got {len(values)}")
    for k in range(len(values)):
        for sign, tag in SHIFT_TAGS:
            shifted = values.copy()
            shifted[k] += sign * SHIFT
            yield k, tag, bind(template, shifted)


def central_difference(loss, theta: Sequence[float], h: float = 1e-4) -> list[float]:
    """Finite-difference gradient of a scalar loss; the reference estimator
    shift-rule results are validated against."""
    values = [float(v) for v in theta]
    out = []
    for k in range(len(values)):
        up = values.copy()
        down = values.copy()
        up[k] += h
        down[k] -= h
        out.append((loss(up) - loss(down)) / (2.0 * h))
    return out
