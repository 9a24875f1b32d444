"""Dense statevector simulator for the QAOA, VQE and GAS circuits.

Qubit ``q`` is bit ``q`` of the basis index (little-endian), matching the
assignment convention of :func:`qselect.qubo.index_to_bits`.

Phase conventions:
    RZ(t)  = diag(exp(-i t/2), exp(+i t/2))
    RZZ(t) = exp(-i t/2 Z(x)Z)
    CPHASE(t) multiplies the all-ones subspace of controls + target by exp(i t)
    IQFT maps |y> to 2^{-m/2} sum_z exp(-2 pi i y z / 2^m) |z> on a register of m qubits
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .qubo import DimensionError, QuboProblem, energy_table

DEFAULT_CAPACITY = 22


class SimulatorError(ValueError):
    pass


class SimulatorCapacityError(SimulatorError):
    pass


@dataclass
class State:
    num_qubits: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        p = self.amplitudes.real ** 2 + self.amplitudes.imag ** 2
        return p

    def norm(self) -> float:
        return float(self.probabilities().sum())

    def copy(self) -> "State":
        return State(self.num_qubits, self.amplitudes.copy())


def init(n: int, capacity: int = DEFAULT_CAPACITY) -> State:
    if n < 1:
        raise SimulatorError("need at least one qubit")
    if n > capacity:
        raise SimulatorCapacityError(f"{n} qubits exceed simulator capacity {capacity}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return State(n, amps)


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: float = 0.0

    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets


SINGLE = {"H", "X", "RX", "RY", "RZ"}
KINDS = SINGLE | {"RZZ", "CX", "CPHASE", "IQFT", "QFT"}


def H(q: int) -> Gate:
    return Gate("H", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def RX(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), angle=theta)


def RY(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), angle=theta)


def RZ(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), angle=theta)


def RZZ(q1: int, q2: int, theta: float) -> Gate:
    return Gate("RZZ", (q1, q2), angle=theta)


def CX(control: int, target: int) -> Gate:
    return Gate("CX", (target,), (control,))


def CPHASE(theta: float, controls: tuple[int, ...], target: int) -> Gate:
    return Gate("CPHASE", (target,), tuple(controls), theta)


def IQFT(register: tuple[int, ...]) -> Gate:
    return Gate("IQFT", tuple(register))


def QFT(register: tuple[int, ...]) -> Gate:
    return Gate("QFT", tuple(register))


def single_qubit_matrix(kind: str, theta: float = 0.0) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == "H":
        r = 1 / math.sqrt(2)
        return np.array([[r, r], [r, -r]], dtype=complex)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "RZ":
        return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)
    raise SimulatorError(f"{kind} is not a single-qubit gate")


def _split_view(amps: np.ndarray, n: int, qubits: tuple[int, ...]) -> tuple[np.ndarray, dict[int, int]]:
    """Reshape so every listed qubit owns a length-2 axis; returns the view and qubit->axis map."""
    order = sorted(qubits, reverse=True)
    shape = []
    axes = {}
    prev = n
    for q in order:
        shape.append(1 << (prev - q - 1))
        axes[q] = len(shape)
        shape.append(2)
        prev = q
    shape.append(1 << prev)
    return amps.reshape(shape), axes


def _index(ndim: int, axes: dict[int, int], values: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * ndim
    for q, v in values.items():
        idx[axes[q]] = v
    return tuple(idx)


def _check(state: State, gate: Gate) -> None:
    if gate.kind not in KINDS:
        raise SimulatorError(f"unknown gate kind {gate.kind!r}")
    qs = gate.qubits()
    if len(set(qs)) != len(qs):
        raise SimulatorError(f"{gate.kind}: target/control qubits must be distinct, got {qs}")
    for q in qs:
        if not 0 <= q < state.num_qubits:
            raise SimulatorError(f"{gate.kind}: qubit {q} out of range for {state.num_qubits} qubits")
    if gate.kind in ("IQFT", "QFT"):
        reg = gate.targets
        if list(reg) != list(range(reg[0], reg[0] + len(reg))):
            raise SimulatorError("QFT register must be contiguous ascending qubits")


def apply(state: State, gate: Gate) -> State:
    """Apply ``gate`` in place and return ``state``."""
    _check(state, gate)
    n = state.num_qubits
    amps = state.amplitudes
    kind = gate.kind

    if kind in SINGLE:
        q = gate.targets[0]
        view = amps.reshape(1 << (n - q - 1), 2, 1 << q)
        a0 = view[:, 0, :]
        a1 = view[:, 1, :]
        if kind == "RZ":
            a0 *= np.exp(-0.5j * gate.angle)
            a1 *= np.exp(0.5j * gate.angle)
        elif kind == "X":
            tmp = a0.copy()
            a0[...] = a1
            a1[...] = tmp
        else:
            _apply_1q(amps, n, q, single_qubit_matrix(kind, gate.angle))
        return state

    if kind == "RZZ":
        q1, q2 = gate.targets
        view, axes = _split_view(amps, n, (q1, q2))
        even = np.exp(-0.5j * gate.angle)
        odd = np.exp(0.5j * gate.angle)
        for b1 in (0, 1):
            for b2 in (0, 1):
                view[_index(view.ndim, axes, {q1: b1, q2: b2})] *= even if b1 == b2 else odd
        return state

    if kind == "CX":
        c, t = gate.controls[0], gate.targets[0]
        view, axes = _split_view(amps, n, (c, t))
        s0 = _index(view.ndim, axes, {c: 1, t: 0})
        s1 = _index(view.ndim, axes, {c: 1, t: 1})
        tmp = view[s0].copy()
        view[s0] = view[s1]
        view[s1] = tmp
        return state

    if kind == "CPHASE":
        qs = gate.controls + gate.targets
        view, axes = _split_view(amps, n, qs)
        view[_index(view.ndim, axes, {q: 1 for q in qs})] *= np.exp(1j * gate.angle)
        return state

    # IQFT / QFT on a contiguous register
    reg = gate.targets
    lo, m = reg[0], len(reg)
    view = amps.reshape(1 << (n - lo - m), 1 << m, 1 << lo)
    if kind == "IQFT":
        view[...] = np.fft.fft(view, axis=1) / math.sqrt(1 << m)
    else:
        view[...] = np.fft.ifft(view, axis=1) * math.sqrt(1 << m)
    return state


def apply_all(state: State, gates) -> State:
    for g in gates:
        apply(state, g)
    return state


def inverse(gate: Gate) -> Gate:
    if gate.kind in ("H", "X", "CX"):
        return gate
    if gate.kind == "IQFT":
        return Gate("QFT", gate.targets)
    if gate.kind == "QFT":
        return Gate("IQFT", gate.targets)
    return Gate(gate.kind, gate.targets, gate.controls, -gate.angle)


def _apply_1q(amps: np.ndarray, n: int, q: int, u: np.ndarray) -> None:
    view = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    a0 = view[:, 0, :]
    a1 = view[:, 1, :]
    tmp = a0.copy()
    a0 *= u[0, 0]
    a0 += u[0, 1] * a1
    a1 *= u[1, 1]
    a1 += u[1, 0] * tmp


def rx_layer(state: State, theta: float) -> State:
    """RX(theta) on every qubit; same result as applying the gates one by one."""
    kernels.rx_layer(state.amplitudes, state.num_qubits, float(theta))
    return state


def ry_layer(state: State, thetas) -> State:
    """RY(thetas[q]) on each qubit q."""
    kernels.ry_layer(state.amplitudes, state.num_qubits, np.ascontiguousarray(thetas, dtype=float))
    return state


def cx_chain(state: State) -> State:
    """CX(q, q+1) for q = 0 .. n-2, in that order."""
    kernels.cx_chain(state.amplitudes, state.num_qubits)
    return state


def expectation_diagonal(state: State, problem: QuboProblem, table: np.ndarray | None = None) -> float:
    """<psi| f |psi> for the diagonal cost f; ``table`` may pass a precomputed energy table."""
    if state.num_qubits != problem.num_vars:
        raise DimensionError(f"state has {state.num_qubits} qubits, problem has {problem.num_vars} variables")
    if table is None:
        table = energy_table(problem)
    return float(state.probabilities() @ table)


def sample(state: State, shots: int, rng: np.random.Generator) -> np.ndarray:
    if shots < 1:
        raise SimulatorError("shots must be >= 1")
    p = state.probabilities()
    p = p / p.sum()
    return rng.choice(p.size, size=shots, p=p)
