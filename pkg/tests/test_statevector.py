from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from qselect import statevector as sv
from qselect.qubo import DimensionError, QuboProblem, evaluate, index_to_bits


def dense_matrix(gate: sv.Gate, n: int) -> np.ndarray:
    """Column k is the image of basis state |k>, built from the gate definitions."""
    dim = 1 << n
    U = np.zeros((dim, dim), dtype=complex)
    bit = lambda k, q: (k >> q) & 1  # noqa: E731
    for k in range(dim):
        if gate.kind in sv.SINGLE:
            q = gate.targets[0]
            m = sv.single_qubit_matrix(gate.kind, gate.angle)
            for out in (0, 1):
                U[(k & ~(1 << q)) | (out << q), k] += m[out, bit(k, q)]
        elif gate.kind == "RZZ":
            z = (1 - 2 * bit(k, gate.targets[0])) * (1 - 2 * bit(k, gate.targets[1]))
            U[k, k] = cmath.exp(-0.5j * gate.angle * z)
        elif gate.kind == "CX":
            c, t = gate.controls[0], gate.targets[0]
            U[k ^ (1 << t) if bit(k, c) else k, k] = 1
        elif gate.kind == "CPHASE":
            on = all(bit(k, q) for q in gate.qubits())
            U[k, k] = cmath.exp(1j * gate.angle) if on else 1
        else:
            reg = gate.targets
            lo, m = reg[0], len(reg)
            M = 1 << m
            y = (k >> lo) & (M - 1)
            rest = k & ~((M - 1) << lo)
            sign = -1 if gate.kind == "IQFT" else 1
            for z in range(M):
                U[rest | (z << lo), k] += cmath.exp(sign * 2j * math.pi * y * z / M) / math.sqrt(M)
    return U


def random_state(rng, n):
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return sv.State(n, psi / np.linalg.norm(psi))


def all_gates(n: int, rng) -> list[sv.Gate]:
    gates = []
    for q in range(n):
        t = float(rng.uniform(-4, 4))
        gates += [sv.H(q), sv.X(q), sv.RX(q, t), sv.RY(q, t), sv.RZ(q, t)]
    for a in range(n):
        for b in range(n):
            if a != b:
                gates += [sv.CX(a, b), sv.RZZ(a, b, float(rng.uniform(-4, 4))),
                          sv.CPHASE(float(rng.uniform(-4, 4)), (a,), b)]
    if n >= 3:
        gates.append(sv.CPHASE(1.1, (0, 2), 1))
    gates.append(sv.CPHASE(0.4, (), n - 1))
    for lo in range(n):
        for m in range(1, n - lo + 1):
            reg = tuple(range(lo, lo + m))
            gates += [sv.IQFT(reg), sv.QFT(reg)]
    return gates


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_gate_matches_dense_oracle(n):
    rng = np.random.default_rng(n)
    for gate in all_gates(n, rng):
        state = random_state(rng, n)
        expect = dense_matrix(gate, n) @ state.amplitudes
        sv.apply(state, gate)
        assert np.max(np.abs(state.amplitudes - expect)) < 1e-10, gate


def test_dense_oracle_is_unitary():
    rng = np.random.default_rng(0)
    for gate in all_gates(3, rng):
        U = dense_matrix(gate, 3)
        assert np.allclose(U.conj().T @ U, np.eye(8), atol=1e-12)


def test_textbook_identities():
    s = sv.apply(sv.init(1), sv.H(0))
    assert np.allclose(s.amplitudes, [1 / math.sqrt(2)] * 2)
    rng = np.random.default_rng(3)
    s = random_state(rng, 3)
    before = s.amplitudes.copy()
    sv.apply_all(s, [sv.X(1), sv.X(1)])
    assert np.allclose(s.amplitudes, before)
    s = sv.apply_all(sv.init(2), [sv.X(0), sv.X(1), sv.RZZ(0, 1, 0.8)])
    assert s.amplitudes[3] == pytest.approx(cmath.exp(-0.4j))


def test_norm_drift_over_random_gates():
    rng = np.random.default_rng(7)
    n = 6
    pool = all_gates(n, rng)
    state = random_state(rng, n)
    for k in rng.integers(0, len(pool), 1000):
        sv.apply(state, pool[k])
    assert abs(state.norm() - 1) < 1e-9


def test_qft_inverts_iqft():
    rng = np.random.default_rng(5)
    for reg in [(0, 1, 2, 3, 4), (1, 2), (2, 3, 4)]:
        s = random_state(rng, 5)
        before = s.amplitudes.copy()
        sv.apply_all(s, [sv.IQFT(reg), sv.QFT(reg)])
        assert np.max(np.abs(s.amplitudes - before)) < 1e-12


def test_inverse_gates():
    rng = np.random.default_rng(9)
    for gate in all_gates(3, rng):
        s = random_state(rng, 3)
        before = s.amplitudes.copy()
        sv.apply_all(s, [gate, sv.inverse(gate)])
        assert np.allclose(s.amplitudes, before, atol=1e-12)


def test_layer_helpers_match_gates():
    rng = np.random.default_rng(2)
    n = 4
    thetas = rng.uniform(-3, 3, n)
    a = random_state(rng, n)
    b = a.copy()
    sv.rx_layer(a, 0.3)
    sv.ry_layer(a, thetas)
    sv.cx_chain(a)
    sv.apply_all(b, [sv.RX(q, 0.3) for q in range(n)] + [sv.RY(q, thetas[q]) for q in range(n)]
                 + [sv.CX(q, q + 1) for q in range(n - 1)])
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-12)


class TestErrors:
    def test_capacity(self):
        assert sv.init(3).amplitudes[0] == 1
        with pytest.raises(sv.SimulatorCapacityError):
            sv.init(23)
        with pytest.raises(sv.SimulatorError):
            sv.init(0)

    @pytest.mark.parametrize("gate", [
        sv.H(3), sv.CX(1, 1), sv.RZZ(0, 0, 1.0), sv.Gate("T", (0,)), sv.IQFT((0, 2)), sv.CPHASE(1.0, (0,), 0),
    ])
    def test_invalid_gates(self, gate):
        with pytest.raises(sv.SimulatorError):
            sv.apply(sv.init(3), gate)

    def test_shots(self):
        with pytest.raises(sv.SimulatorError):
            sv.sample(sv.init(1), 0, np.random.default_rng())


class TestMeasurement:
    def test_basis_state_expectation(self, small_problem):
        for k in range(8):
            s = sv.init(3)
            s.amplitudes[:] = 0
            s.amplitudes[k] = 1
            assert sv.expectation_diagonal(s, small_problem) == evaluate(small_problem, index_to_bits(k, 3))

    def test_uniform_expectation(self, small_problem):
        # mean over the 8 assignments: (0 + 2 - 3 + 3) / 4 = 0.5
        s = sv.apply_all(sv.init(3), [sv.H(q) for q in range(3)])
        oracle = np.mean([evaluate(small_problem, index_to_bits(k, 3)) for k in range(8)])
        assert oracle == 0.5
        assert sv.expectation_diagonal(s, small_problem) == pytest.approx(oracle, abs=1e-12)

    def test_dimension_mismatch(self, small_problem):
        with pytest.raises(DimensionError):
            sv.expectation_diagonal(sv.init(2), small_problem)

    def test_sampling(self):
        s = sv.init(2)
        s.amplitudes[:] = [0, 0, 1, 0]
        assert set(sv.sample(s, 50, np.random.default_rng(0)).tolist()) == {2}
        h = sv.apply(sv.init(1), sv.H(0))
        shots = sv.sample(h, 100_000, np.random.default_rng(1))
        assert abs(shots.mean() - 0.5) < 0.01
        again = sv.sample(h, 100, np.random.default_rng(4))
        assert np.array_equal(again, sv.sample(h, 100, np.random.default_rng(4)))
