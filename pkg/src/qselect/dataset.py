"""Labeling problems by running every solver, and the dataset CSV format."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .qubo import (
    BRUTE_FORCE_MAX_VARS,
    FEATURE_NAMES,
    CapacityError,
    FeatureVector,
    QuboProblem,
    brute_force,
    extract_features,
)
from .scoring import RunDistribution, ScoreWeights, best_solver, problem_score
from .solvers import PRIORITY, SolverConfig, SolverKind, run_many

HEADER = (
    ["problem_id"]
    + list(FEATURE_NAMES)
    + [f"score_{k.value}" for k in PRIORITY]
    + [f"ps_{k.value}" for k in PRIORITY]
    + ["label"]
)


class DatasetParseError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetRecord:
    problem_id: str
    features: FeatureVector
    scores: Mapping[SolverKind, float]
    ps: Mapping[SolverKind, float]
    label: SolverKind

    def __post_init__(self) -> None:
        for name, table in (("scores", self.scores), ("ps", self.ps)):
            missing = [k.value for k in PRIORITY if k not in table]
            if missing:
                raise ValueError(f"record {self.problem_id}: {name} missing {', '.join(missing)}")

    def row(self) -> list[str]:
        return (
            [self.problem_id]
            + [repr(v) for v in self.features.as_tuple()]
            + [repr(float(self.scores[k])) for k in PRIORITY]
            + [repr(float(self.ps[k])) for k in PRIORITY]
            + [self.label.value]
        )


def solve_all(problem: QuboProblem, runs: int = 100, seed: int = 0,
              config: SolverConfig | None = None) -> dict[SolverKind, RunDistribution]:
    if problem.num_vars > BRUTE_FORCE_MAX_VARS:
        raise CapacityError(f"{problem.num_vars} variables: no reference optimum within enumeration budget")
    if problem.reference_optimum is None:
        problem = problem.with_reference(brute_force(problem).min_value)
    config = SolverConfig.defaults(problem) if config is None else config
    return {k: run_many(problem, k, runs, seed, config.for_kind(k)) for k in PRIORITY}


def record_from_distributions(problem: QuboProblem, dists: Mapping[SolverKind, RunDistribution],
                              problem_id: str = "", weights: ScoreWeights = ScoreWeights(),
                              normalize: bool = True) -> DatasetRecord:
    scores = {k: problem_score(problem, dists[k], weights, normalize) for k in PRIORITY}
    ps = {k: dists[k].p_s for k in PRIORITY}
    return DatasetRecord(problem_id, extract_features(problem), scores, ps, best_solver(scores))


def label_problem(problem: QuboProblem, runs: int = 100, weights: ScoreWeights = ScoreWeights(),
                  seed: int = 0, problem_id: str = "", config: SolverConfig | None = None,
                  normalize: bool = True) -> DatasetRecord:
    """Run all five solvers ``runs`` times, score them and label the winner."""
    dists = solve_all(problem, runs, seed, config)
    return record_from_distributions(problem, dists, problem_id, weights, normalize)


def dumps_dataset(records: Iterable[DatasetRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def save_dataset(records: Iterable[DatasetRecord], path: str | Path) -> None:
    Path(path).write_text(dumps_dataset(records))


def _parse_row(row: Sequence[str], line: int) -> DatasetRecord:
    if len(row) != len(HEADER):
        raise DatasetParseError(f"line {line}: expected {len(HEADER)} fields, got {len(row)}")
    try:
        feats = row[1:10]
        features = FeatureVector(
            int(feats[0]), int(feats[1]), int(feats[2]), *(float(v) for v in feats[3:])
        )
        scores = {k: float(v) for k, v in zip(PRIORITY, row[10:15])}
        ps = {k: float(v) for k, v in zip(PRIORITY, row[15:20])}
        label = SolverKind.parse(row[20])
    except ValueError as exc:
        raise DatasetParseError(f"line {line}: {exc}") from exc
    return DatasetRecord(row[0], features, scores, ps, label)


def loads_dataset(text: str) -> list[DatasetRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetParseError("line 1: missing header") from None
    if header != HEADER:
        bad = [h for h in HEADER if h not in header] or header
        raise DatasetParseError(f"line 1: header mismatch (offending fields: {', '.join(bad)})")
    return [_parse_row(row, reader.line_num) for row in reader if row]


def load_dataset(path: str | Path) -> list[DatasetRecord]:
    return loads_dataset(Path(path).read_text())


def cumulative_rows(dists: Mapping[SolverKind, RunDistribution]) -> list[list[str]]:
    """Sorted run values per solver with their empirical CDF level."""
    rows = [["solver", "rank", "value", "cumulative"]]
    for kind in PRIORITY:
        if kind not in dists:
            continue
        vals = sorted(dists[kind].values)
        for i, v in enumerate(vals):
            rows.append([kind.value, str(i), repr(float(v)), repr((i + 1) / len(vals))])
    return rows
