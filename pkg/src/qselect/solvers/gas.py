"""Grover adaptive search over a quantum dictionary (key register -> value register).

Two interchangeable backends produce the same measurement distribution:

``circuit``
    Full key+value statevector. State preparation A is Hadamards, controlled
    phase rotations and an inverse QFT on the value register; the Grover
    operator is A S0 A^dagger S_f with S_f a Z on the value sign qubit.
``dictionary``
    After A the value register is a deterministic function of the key, so A
    S0 A^dagger acts as inversion about the uniform key state. Only the 2^N
    key amplitudes are stored, which keeps the solver usable at N + m well
    beyond what the full circuit would allow.
"""
from __future__ import annotations

import math

import numpy as np

from .. import statevector as sv
from ..qubo import (
    QuboProblem,
    energy_table,
    evaluate,
    index_to_bits,
    integer_scaled,
    posiform_bounds,
    twos_complement_bits,
)
from .config import GASConfig, RunResult, SolverKind


class GASSizingError(ValueError):
    pass


def to_signed(value: int, m: int) -> int:
    """Interpret an m-bit register content as two's complement."""
    value &= (1 << m) - 1
    return value - (1 << m) if value >> (m - 1) else value


def required_value_qubits(problem: QuboProblem) -> int:
    """Register width that holds f(x) - shift for every shift in the objective range.

    The offset is not encoded; ``problem`` must be integer-valued.
    """
    b = posiform_bounds(problem.with_offset(0.0))
    width = b.upper - b.lower
    return twos_complement_bits(-width, width)


def dictionary_gates(problem: QuboProblem, m: int, shift: int = 0) -> list[sv.Gate]:
    """State preparation A for keys 0..N-1 and value qubits N..N+m-1 encoding f(x) - shift.

    ``problem`` must have integer coefficients; its offset is ignored.
    """
    n = problem.num_vars
    M = 1 << m
    value = [n + k for k in range(m)]
    gates = [sv.H(q) for q in range(n)] + [sv.H(q) for q in value]

    def rotate(weight: float, controls: tuple[int, ...]) -> None:
        for k in range(m):
            angle = 2 * math.pi * weight * (1 << k) / M
            gates.append(sv.CPHASE(angle, controls, value[k]))

    if shift:
        rotate(-shift, ())
    for i, w in problem.linear.items():
        rotate(w, (i,))
    for (i, j), w in problem.quadratic.items():
        rotate(w, (i, j))
    gates.append(sv.IQFT(tuple(value)))
    return gates


def prepare_dictionary(problem: QuboProblem, m: int, shift: int = 0) -> sv.State:
    return sv.apply_all(sv.init(problem.num_vars + m), dictionary_gates(problem, m, shift))


def grover_circuit_state(problem: QuboProblem, m: int, shift: int, rotations: int) -> sv.State:
    n = problem.num_vars
    a_gates = dictionary_gates(problem, m, shift)
    a_inv = [sv.inverse(g) for g in reversed(a_gates)]
    sign_qubit = n + m - 1
    state = sv.apply_all(sv.init(n + m), a_gates)
    for _ in range(rotations):
        sv.apply(state, sv.CPHASE(math.pi, (), sign_qubit))  # S_f
        sv.apply_all(state, a_inv)
        state.amplitudes[0] *= -1  # S_0
        sv.apply_all(state, a_gates)
    return state


def grover_key_amplitudes(marked: np.ndarray, rotations: int) -> np.ndarray:
    psi = np.full(marked.size, 1 / math.sqrt(marked.size))
    for _ in range(rotations):
        psi[marked] *= -1
        psi = 2 * psi.mean() - psi
    return psi


class _Sampler:
    def __init__(self, problem: QuboProblem, m: int, backend: str, rng: np.random.Generator):
        self.problem = problem
        self.m = m
        self.n = problem.num_vars
        self.backend = backend
        self.rng = rng
        self.values = np.rint(energy_table(problem.with_offset(0.0))).astype(np.int64)

    def marked(self, shift: int) -> np.ndarray:
        reg = (self.values - shift) & ((1 << self.m) - 1)
        return (reg >> (self.m - 1)).astype(bool)

    def measure(self, shift: int, rotations: int) -> tuple[int, int]:
        """One shot after ``rotations`` Grover iterations: (key, signed value register)."""
        if self.backend == "dictionary":
            p = grover_key_amplitudes(self.marked(shift), rotations) ** 2
            key = int(self.rng.choice(p.size, p=p / p.sum()))
            return key, to_signed(int(self.values[key] - shift), self.m)
        state = grover_circuit_state(self.problem, self.m, shift, rotations)
        idx = int(sv.sample(state, 1, self.rng)[0])
        return idx & ((1 << self.n) - 1), to_signed(idx >> self.n, self.m)


def run_gas(problem: QuboProblem, config: GASConfig, seed: int) -> RunResult:
    """Grover adaptive search.

    Each improvement moves the encoded threshold to the new best value;
    the search stops after ``threshold`` consecutive samples without a
    negative value register or after ``max_iterations`` samples.
    """
    rng = np.random.default_rng(seed)
    n = problem.num_vars
    if problem.max_abs_coefficient == 0:
        x = tuple(int(v) for v in rng.integers(0, 2, size=n))
        return RunResult(x, evaluate(problem, x), SolverKind.GAS, seed, info={"iterations": 0})
    iproblem, _ = integer_scaled(problem, config.precision)
    iproblem = iproblem.with_offset(0.0)
    needed = required_value_qubits(iproblem)
    m = needed if config.value_qubits is None else config.value_qubits
    if m < needed:
        raise GASSizingError(f"{m} value qubits cannot hold the objective range; need {needed}")
    # the circuit backend holds all n + m qubits; the dictionary backend only tracks 2^n keys
    if config.backend == "circuit" and n + m > sv.DEFAULT_CAPACITY:
        raise GASSizingError(f"{n} key + {m} value qubits exceed simulator capacity {sv.DEFAULT_CAPACITY}")
    if n > sv.DEFAULT_CAPACITY:
        raise GASSizingError(f"{n} key qubits exceed simulator capacity {sv.DEFAULT_CAPACITY}")

    sampler = _Sampler(iproblem, m, config.backend, rng)
    best_key: int | None = None
    best_val = 0
    shift = 0
    lam = 1.0
    cap = math.sqrt(2 ** n)
    failures = 0
    iterations = 0
    rotations_total = 0
    improvements = 0
    while iterations < config.max_iterations:
        rotations = int(rng.integers(0, math.ceil(lam)))
        key, reg = sampler.measure(shift, rotations)
        iterations += 1
        rotations_total += rotations
        value = reg + shift
        if best_key is None or reg < 0:
            best_key, best_val, shift = key, value, value
            improvements += 1
            lam = 1.0
            failures = 0
        else:
            failures += 1
            lam = min(lam * 8 / 7, cap)
            if failures >= config.threshold:
                break
    x = index_to_bits(best_key, n)
    return RunResult(
        x, evaluate(problem, x), SolverKind.GAS, seed,
        info={"iterations": iterations, "improvements": improvements, "rotations": rotations_total,
              "value_qubits": m},
    )
