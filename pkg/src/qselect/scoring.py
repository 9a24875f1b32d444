"""Run statistics, the weighted solver score and the priority tie-break."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .qubo import BoundPair, DegenerateProblemError, QuboProblem, brute_force, posiform_bounds
from .solvers.config import PRIORITY, RunResult, SolverKind


def matches_reference(value: float, reference: float) -> bool:
    return abs(value - reference) <= 1e-9 * max(1.0, abs(reference))


@dataclass(frozen=True)
class RunDistribution:
    """Objective values of R runs of one solver on one problem."""

    values: tuple[float, ...]
    reference: float
    feasible: tuple[bool, ...] = ()
    assignments: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a run distribution needs at least one value")
        if self.feasible and len(self.feasible) != len(self.values):
            raise ValueError("feasible flags must match the number of runs")

    @classmethod
    def from_results(cls, problem: QuboProblem, results: Sequence[RunResult],
                     reference: float | None = None) -> "RunDistribution":
        if reference is None:
            reference = problem.reference_optimum
        if reference is None:
            reference = brute_force(problem).min_value
        return cls(
            values=tuple(r.objective for r in results),
            reference=float(reference),
            feasible=tuple(problem.is_feasible(r.assignment) for r in results),
            assignments=tuple(r.assignment for r in results),
        )

    @property
    def runs(self) -> int:
        return len(self.values)

    @property
    def p_s(self) -> float:
        return sum(matches_reference(v, self.reference) for v in self.values) / self.runs

    @property
    def p_v(self) -> float:
        if not self.feasible:
            return 1.0
        return sum(self.feasible) / self.runs

    @property
    def e_opt(self) -> float:
        return min(self.values)

    @property
    def e_avg(self) -> float:
        return float(np.mean(self.values))

    @property
    def e_var(self) -> float:
        return float(np.var(self.values))


@dataclass(frozen=True)
class ScoreWeights:
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    delta: float = 1.0
    eta: float = 1.0

    def __post_init__(self) -> None:
        if min(self.alpha, self.beta, self.gamma, self.delta, self.eta) < 0:
            raise ValueError("score weights must be non-negative")


def score(dist: RunDistribution, reference: float | None = None, weights: ScoreWeights = ScoreWeights(),
          bounds: BoundPair | None = None, normalize: bool = True) -> float:
    """Weighted solver score, lower is better.

    -alpha p_s + beta (E_opt - E_ref)/W + gamma (E_avg - E_ref)/W + delta E_var/W^2 - eta p_v

    W is the width of the objective bounds when ``normalize`` is set, else 1.
    """
    ref = dist.reference if reference is None else reference
    gap_opt = dist.e_opt - ref
    gap_avg = dist.e_avg - ref
    var = dist.e_var
    if normalize:
        if bounds is None:
            raise ValueError("normalized scoring needs objective bounds")
        w = bounds.width
        if w == 0:
            if gap_opt or gap_avg or var:
                raise DegenerateProblemError("zero bound width with nonzero energy terms")
            w = 1.0
    else:
        w = 1.0
    return (
        -weights.alpha * dist.p_s
        + weights.beta * gap_opt / w
        + weights.gamma * gap_avg / w
        + weights.delta * var / (w * w)
        - weights.eta * dist.p_v
    )


def problem_score(problem: QuboProblem, dist: RunDistribution, weights: ScoreWeights = ScoreWeights(),
                  normalize: bool = True) -> float:
    return score(dist, dist.reference, weights, posiform_bounds(problem), normalize)


def rank_solvers(scores: Mapping[SolverKind, float]) -> list[SolverKind]:
    """Solvers from best to worst; equal scores ordered by priority."""
    missing = [k.value for k in PRIORITY if k not in scores]
    if missing:
        raise KeyError(f"missing scores for: {', '.join(missing)}")
    return sorted(PRIORITY, key=lambda k: (scores[k], k.priority_rank))


def best_solver(scores: Mapping[SolverKind, float]) -> SolverKind:
    return rank_solvers(scores)[0]
