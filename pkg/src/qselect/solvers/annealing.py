"""Classical simulated annealing and path-integral simulated quantum annealing."""
from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..qubo import QuboProblem, evaluate
from .config import QAConfig, RunResult, SAConfig, SolverKind


def _arrays(problem: QuboProblem) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.ascontiguousarray(problem.coupling_matrix, dtype=float),
        np.ascontiguousarray(problem.linear_vector, dtype=float),
    )


def sa_temperatures(problem: QuboProblem, config: SAConfig) -> np.ndarray:
    t0 = config.t_start if config.t_start is not None else 2.0 * problem.max_abs_coefficient
    t1 = config.t_end if config.t_end is not None else 0.01 * problem.min_abs_coefficient
    if not 0 < t1 <= t0:
        raise ValueError(f"temperature schedule must satisfy 0 < T1 <= T0, got {t0} -> {t1}")
    return np.geomspace(t0, t1, config.sweeps)


def run_sa(problem: QuboProblem, config: SAConfig, seed: int) -> RunResult:
    """Single-flip Metropolis sweeps under geometric cooling; returns the best state visited."""
    rng = np.random.default_rng(seed)
    n = problem.num_vars
    x0 = rng.integers(0, 2, size=n).astype(np.int8)
    if problem.max_abs_coefficient == 0:
        x = tuple(int(v) for v in x0)
        return RunResult(x, evaluate(problem, x), SolverKind.SA, seed)
    betas = 1.0 / sa_temperatures(problem, config)
    uniforms = rng.random((config.sweeps, n))
    Q, a = _arrays(problem)
    best, _ = kernels.anneal_sa(Q, a, x0, betas, uniforms)
    x = tuple(int(v) for v in best)
    return RunResult(x, evaluate(problem, x), SolverKind.SA, seed)


def transverse_coupling(gamma: float, beta: float, slices: int) -> float:
    """Inter-slice ferromagnetic coupling -1/2 ln tanh(beta Gamma / P); zero field decouples slices."""
    if gamma <= 0:
        return 0.0
    return -0.5 * math.log(math.tanh(beta * gamma / slices))


def run_qa_proxy(problem: QuboProblem, config: QAConfig, seed: int) -> RunResult:
    """Path-integral Monte Carlo over ``trotter_slices`` replicas with a linearly decreasing field.

    Stands in for hardware annealing; the best slice configuration seen
    during the run is returned.
    """
    rng = np.random.default_rng(seed)
    n, P = problem.num_vars, config.trotter_slices
    x0 = rng.integers(0, 2, size=(P, n)).astype(np.int8)
    if problem.max_abs_coefficient == 0:
        x = tuple(int(v) for v in x0[0])
        return RunResult(x, evaluate(problem, x), SolverKind.QA_PROXY, seed)
    temperature = config.temperature if config.temperature is not None else 0.1 * problem.max_abs_coefficient
    beta = 1.0 / temperature
    gammas = np.linspace(config.gamma_start, config.gamma_end, config.sweeps)
    jperp = np.array([transverse_coupling(g, beta, P) for g in gammas])
    uniforms = rng.random((config.sweeps, P, n))
    Q, a = _arrays(problem)
    best, _ = kernels.anneal_sqa(Q, a, x0, beta / P, jperp, uniforms)
    x = tuple(int(v) for v in best)
    return RunResult(x, evaluate(problem, x), SolverKind.QA_PROXY, seed)
