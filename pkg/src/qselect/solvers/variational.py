"""QAOA and VQE on the statevector simulator, optimized with a derivative-free method."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .. import statevector as sv
from ..qubo import QuboProblem, energy_table, evaluate, index_to_bits
from .config import OptimizerConfig, QAOAConfig, RunResult, SolverKind, VQEConfig


def ising_terms(problem: QuboProblem) -> tuple[float, dict[int, float], dict[tuple[int, int], float]]:
    """Substitute x = (1 - z)/2: f = const + sum h_i z_i + sum J_ij z_i z_j."""
    const = problem.offset
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    for i, a in problem.linear.items():
        const += a / 2
        h[i] = h.get(i, 0.0) - a / 2
    for (i, j), b in problem.quadratic.items():
        const += b / 4
        h[i] = h.get(i, 0.0) - b / 4
        h[j] = h.get(j, 0.0) - b / 4
        J[(i, j)] = b / 4
    return const, h, J


def cost_scale(problem: QuboProblem) -> float:
    """Angles act on f / max|coefficient| so one angle range fits every problem."""
    m = problem.max_abs_coefficient
    return 1.0 / m if m > 0 else 1.0


def qaoa_circuit(problem: QuboProblem, gammas, betas) -> list[sv.Gate]:
    """Gate list: H layer, then per repetition RZ/RZZ cost layer and RX mixer."""
    n = problem.num_vars
    _, h, J = ising_terms(problem)
    s = cost_scale(problem)
    gates = [sv.H(q) for q in range(n)]
    for gamma, beta in zip(gammas, betas):
        for i, hi in h.items():
            gates.append(sv.RZ(i, 2 * gamma * s * hi))
        for (i, j), jij in J.items():
            gates.append(sv.RZZ(i, j, 2 * gamma * s * jij))
        gates.extend(sv.RX(q, 2 * beta) for q in range(n))
    return gates


def qaoa_state(n: int, phase_table: np.ndarray, gammas, betas) -> sv.State:
    """Same state as :func:`qaoa_circuit` up to a global phase; the cost layer is applied as one diagonal."""
    state = sv.init(n)
    state.amplitudes[:] = 1 / np.sqrt(1 << n)
    for gamma, beta in zip(gammas, betas):
        state.amplitudes *= np.exp(-1j * gamma * phase_table)
        sv.rx_layer(state, 2 * beta)
    return state


def vqe_circuit(n: int, layers: int, thetas) -> list[sv.Gate]:
    """``layers`` x [RY on every qubit, CX chain i -> i+1] followed by a final RY layer."""
    thetas = np.asarray(thetas, dtype=float).reshape(layers + 1, n)
    gates: list[sv.Gate] = []
    for layer in range(layers):
        gates.extend(sv.RY(q, thetas[layer, q]) for q in range(n))
        gates.extend(sv.CX(q, q + 1) for q in range(n - 1))
    gates.extend(sv.RY(q, thetas[layers, q]) for q in range(n))
    return gates


def vqe_state(n: int, layers: int, thetas) -> sv.State:
    """Fast path equal to applying :func:`vqe_circuit` gate by gate."""
    thetas = np.asarray(thetas, dtype=float).reshape(layers + 1, n)
    state = sv.init(n)
    for layer in range(layers):
        sv.ry_layer(state, thetas[layer])
        sv.cx_chain(state)
    return sv.ry_layer(state, thetas[layers])


@dataclass
class VariationalOutcome:
    params: np.ndarray
    expectation: float
    state: sv.State
    history: list[float]
    initial_expectation: float


def _optimize(objective, x0: np.ndarray, opt: OptimizerConfig) -> tuple[np.ndarray, float, list[float]]:
    history: list[float] = []
    best = [np.inf, x0]

    def tracked(p):
        val = objective(p)
        history.append(val)
        if val < best[0]:
            best[0] = val
            best[1] = np.array(p, copy=True)
        return val

    if opt.kind == "cobyla":
        minimize(tracked, x0, method="COBYLA", tol=opt.tol,
                 options={"maxiter": opt.max_evals, "rhobeg": 0.5})
    else:
        minimize(tracked, x0, method="Nelder-Mead",
                 options={"maxfev": opt.max_evals, "xatol": opt.tol, "fatol": opt.tol})
    return best[1], best[0], history


def optimize_qaoa(problem: QuboProblem, config: QAOAConfig, rng: np.random.Generator,
                  table: np.ndarray | None = None) -> VariationalOutcome:
    n, p = problem.num_vars, config.reps
    table = energy_table(problem) if table is None else table
    phase = (table - problem.offset) * cost_scale(problem)

    def expectation(params):
        state = qaoa_state(n, phase, params[:p], params[p:])
        return float(state.probabilities() @ table)

    x0 = np.concatenate([rng.uniform(0, np.pi, p), rng.uniform(0, np.pi / 2, p)])
    e0 = expectation(x0)
    params, value, history = _optimize(expectation, x0, config.optimizer)
    state = qaoa_state(n, phase, params[:p], params[p:])
    return VariationalOutcome(params, value, state, history, e0)


def optimize_vqe(problem: QuboProblem, config: VQEConfig, rng: np.random.Generator,
                 table: np.ndarray | None = None) -> VariationalOutcome:
    n, L = problem.num_vars, config.layers
    table = energy_table(problem) if table is None else table

    def expectation(params):
        return float(vqe_state(n, L, params).probabilities() @ table)

    x0 = rng.uniform(-np.pi, np.pi, n * (L + 1))
    e0 = expectation(x0)
    params, value, history = _optimize(expectation, x0, config.optimizer)
    return VariationalOutcome(params, value, vqe_state(n, L, params), history, e0)


def _readout(problem: QuboProblem, outcome: VariationalOutcome, shots: int, rng, kind, seed) -> RunResult:
    n = problem.num_vars
    samples = np.unique(sv.sample(outcome.state, shots, rng))
    candidates = [index_to_bits(int(k), n) for k in samples]
    values = [evaluate(problem, x) for x in candidates]
    best = int(np.argmin(values))
    return RunResult(
        candidates[best], values[best], kind, seed,
        info={"expectation": outcome.expectation, "evaluations": len(outcome.history)},
    )


def _check_capacity(problem: QuboProblem) -> None:
    if problem.num_vars > sv.DEFAULT_CAPACITY:
        raise sv.SimulatorCapacityError(
            f"{problem.num_vars} qubits exceed simulator capacity {sv.DEFAULT_CAPACITY}")


def run_qaoa(problem: QuboProblem, config: QAOAConfig, seed: int, table: np.ndarray | None = None) -> RunResult:
    _check_capacity(problem)
    rng = np.random.default_rng(seed)
    outcome = optimize_qaoa(problem, config, rng, table)
    return _readout(problem, outcome, config.shots, rng, SolverKind.QAOA, seed)


def run_vqe(problem: QuboProblem, config: VQEConfig, seed: int, table: np.ndarray | None = None) -> RunResult:
    _check_capacity(problem)
    rng = np.random.default_rng(seed)
    outcome = optimize_vqe(problem, config, rng, table)
    return _readout(problem, outcome, config.shots, rng, SolverKind.VQE, seed)
