"""Compiled statevector update kernels.

Layout: a state on n qubits is a contiguous complex128 array of 2**n
amplitudes, qubit 0 the most significant index bit, so qubit q flips with
stride 1 << (n - 1 - q).  All kernels mutate in place and are compiled
nogil so worker threads overlap instead of serializing on the interpreter
lock; cache=True amortizes compilation across processes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = {"cache": True, "nogil": True}


@njit(**_JIT)
def apply_h(amps: np.ndarray, n: int, q: int) -> None:
    stride = 1 << (n - 1 - q)
    inv = 1.0 / np.sqrt(2.0)
    for base in range(0, 1 << n, stride << 1):
        for i in range(base, base + stride):
            a0 = amps[i]
            a1 = amps[i + stride]
            amps[i] = (a0 + a1) * inv
            amps[i + stride] = (a0 - a1) * inv


@njit(**_JIT)
def apply_x(amps: np.ndarray, n: int, q: int) -> None:
    stride = 1 << (n - 1 - q)
    for base in range(0, 1 << n, stride << 1):
        for i in range(base, base + stride):
            a0 = amps[i]
            amps[i] = amps[i + stride]
            amps[i + stride] = a0


@njit(**_JIT)
def apply_ry(amps: np.ndarray, n: int, q: int, theta: float) -> None:
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    stride = 1 << (n - 1 - q)
    for base in range(0, 1 << n, stride << 1):
        for i in range(base, base + stride):
            a0 = amps[i]
            a1 = amps[i + stride]
            amps[i] = c * a0 - s * a1
            amps[i + stride] = s * a0 + c * a1


@njit(**_JIT)
def apply_rz(amps: np.ndarray, n: int, q: int, theta: float) -> None:
    p0 = np.exp(-0.5j * theta)
    p1 = np.exp(0.5j * theta)
    mask = 1 << (n - 1 - q)
    for i in range(1 << n):
        amps[i] *= p1 if i & mask else p0


@njit(**_JIT)
def apply_cnot(amps: np.ndarray, n: int, control: int, target: int) -> None:
    cmask = 1 << (n - 1 - control)
    tmask = 1 << (n - 1 - target)
    for i in range(1 << n):
        if (i & cmask) and not (i & tmask):
            a0 = amps[i]
            amps[i] = amps[i | tmask]
            amps[i | tmask] = a0


@njit(**_JIT)
def pauli_expectation(amps: np.ndarray, n: int, xmask: int, ymask: int, zmask: int, ny: int) -> float:
    """<P> for a Pauli product given as X/Y/Z qubit masks; ny = |Y factors|."""
    flip = xmask | ymask
    phase_mask = ymask | zmask
    acc = 0.0 + 0.0j
    for i in range(1 << n):
        m = i & phase_mask
        bits = 0
        while m:
            bits += 1
            m &= m - 1
        term = np.conj(amps[i ^ flip]) * amps[i]
        acc += -term if bits & 1 else term
    return ((1j ** ny) * acc).real


@njit(**_JIT)
def born_probabilities(amps: np.ndarray, out: np.ndarray) -> None:
    for i in range(amps.shape[0]):
        a = amps[i]
        out[i] = a.real * a.real + a.imag * a.imag
