"""Dispatch and repeated independent runs."""
from __future__ import annotations

import numpy as np

from ..qubo import QuboProblem, energy_table
from .annealing import run_qa_proxy, run_sa
from .config import PRIORITY, RunResult, SolverKind, default_config
from .gas import run_gas
from .variational import run_qaoa, run_vqe


def run_seed(base_seed: int, kind: SolverKind, index: int) -> int:
    seq = np.random.SeedSequence([base_seed, kind.priority_rank, index])
    return int(seq.generate_state(2, dtype=np.uint32).view(np.uint64)[0] >> 1)


def run_solver(problem: QuboProblem, kind: SolverKind, config=None, seed: int = 0, table=None) -> RunResult:
    config = default_config(kind, problem) if config is None else config
    if kind is SolverKind.SA:
        return run_sa(problem, config, seed)
    if kind is SolverKind.QA_PROXY:
        return run_qa_proxy(problem, config, seed)
    if kind is SolverKind.GAS:
        return run_gas(problem, config, seed)
    if kind is SolverKind.QAOA:
        return run_qaoa(problem, config, seed, table)
    return run_vqe(problem, config, seed, table)


def run_many(problem: QuboProblem, kind: SolverKind, runs: int = 100, base_seed: int = 0, config=None):
    """``runs`` independent runs with seeds derived from (base_seed, kind, run index)."""
    from ..scoring import RunDistribution

    if runs < 1:
        raise ValueError("runs must be >= 1")
    config = default_config(kind, problem) if config is None else config
    table = energy_table(problem) if kind in (SolverKind.QAOA, SolverKind.VQE) else None
    results = [
        run_solver(problem, kind, config, run_seed(base_seed, kind, i), table)
        for i in range(runs)
    ]
    return RunDistribution.from_results(problem, results)


__all__ = ["PRIORITY", "run_many", "run_seed", "run_solver"]
