"""Solver kinds, per-solver configuration and the size-scaling defaults."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from ..qubo import QuboProblem


class SolverKind(Enum):
    """The five solvers, declared in tie-break priority order."""

    QAOA = "qaoa"
    VQE = "vqe"
    GAS = "gas"
    QA_PROXY = "qa"
    SA = "sa"

    @property
    def priority_rank(self) -> int:
        return PRIORITY.index(self) + 1

    @classmethod
    def parse(cls, name: str) -> "SolverKind":
        key = name.strip().lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown solver {name!r}; choose from {', '.join(k.value for k in cls)}")


PRIORITY = tuple(SolverKind)


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "cobyla"
    max_evals: int = 400
    tol: float = 1e-4

    def __post_init__(self) -> None:
        if self.kind not in ("cobyla", "nelder-mead"):
            raise ValueError(f"unsupported optimizer {self.kind!r}")
        if self.max_evals < 1:
            raise ValueError("max_evals must be positive")


@dataclass(frozen=True)
class QAOAConfig:
    reps: int = 1
    shots: int = 100
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)


@dataclass(frozen=True)
class VQEConfig:
    layers: int = 2
    shots: int = 100
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)


@dataclass(frozen=True)
class GASConfig:
    threshold: int = 2
    precision: float = 1.0
    value_qubits: int | None = None
    max_iterations: int = 1000
    backend: str = "dictionary"

    def __post_init__(self) -> None:
        if self.backend not in ("dictionary", "circuit"):
            raise ValueError(f"unknown GAS backend {self.backend!r}")


@dataclass(frozen=True)
class QAConfig:
    trotter_slices: int = 20
    sweeps: int = 1
    gamma_start: float = 3.0
    gamma_end: float = 0.01
    temperature: float | None = None  # None -> 0.1 * max |coefficient|


@dataclass(frozen=True)
class SAConfig:
    sweeps: int = 1
    t_start: float | None = None  # None -> 2 * max |coefficient|
    t_end: float | None = None  # None -> 0.01 * min nonzero |coefficient|


KIND_CONFIG = {
    SolverKind.QAOA: QAOAConfig,
    SolverKind.VQE: VQEConfig,
    SolverKind.GAS: GASConfig,
    SolverKind.QA_PROXY: QAConfig,
    SolverKind.SA: SAConfig,
}


def qaoa_reps(n: int) -> int:
    return math.ceil(2 * math.sqrt(n))


def tts_sweeps(n: int, b: float) -> int:
    """Sweep budget following the time-to-solution law 10^(b sqrt(N))."""
    return max(1, round(10 ** (b * math.sqrt(n))))


def gas_threshold(n: int) -> int:
    return 2 * n


def default_config(kind: SolverKind, problem: QuboProblem, **overrides: Any):
    n = problem.num_vars
    if kind is SolverKind.QAOA:
        cfg = QAOAConfig(reps=qaoa_reps(n))
    elif kind is SolverKind.VQE:
        cfg = VQEConfig()
    elif kind is SolverKind.GAS:
        cfg = GASConfig(threshold=gas_threshold(n))
    elif kind is SolverKind.QA_PROXY:
        cfg = QAConfig(sweeps=tts_sweeps(n, 0.7))
    else:
        cfg = SAConfig(sweeps=tts_sweeps(n, 0.5))
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **overrides) if overrides else cfg


@dataclass(frozen=True)
class SolverConfig:
    """One configuration per solver kind."""

    qaoa: QAOAConfig
    vqe: VQEConfig
    gas: GASConfig
    qa_proxy: QAConfig
    sa: SAConfig

    @classmethod
    def defaults(cls, problem: QuboProblem) -> "SolverConfig":
        return cls(*(default_config(k, problem) for k in PRIORITY))

    def for_kind(self, kind: SolverKind):
        return (self.qaoa, self.vqe, self.gas, self.qa_proxy, self.sa)[PRIORITY.index(kind)]


@dataclass(frozen=True)
class RunResult:
    assignment: tuple[int, ...]
    objective: float
    kind: SolverKind
    seed: int
    info: dict = field(default_factory=dict, compare=False)
