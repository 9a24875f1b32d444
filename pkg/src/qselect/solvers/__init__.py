from .annealing import run_qa_proxy, run_sa
from .config import (
    PRIORITY,
    GASConfig,
    OptimizerConfig,
    QAConfig,
    QAOAConfig,
    RunResult,
    SAConfig,
    SolverConfig,
    SolverKind,
    VQEConfig,
    default_config,
)
from .gas import GASSizingError, run_gas
from .runner import run_many, run_seed, run_solver
from .variational import run_qaoa, run_vqe

__all__ = [
    "PRIORITY", "GASConfig", "GASSizingError", "OptimizerConfig", "QAConfig", "QAOAConfig",
    "RunResult", "SAConfig", "SolverConfig", "SolverKind", "VQEConfig", "default_config",
    "run_gas", "run_many", "run_qa_proxy", "run_qaoa", "run_sa", "run_seed", "run_solver", "run_vqe",
]
