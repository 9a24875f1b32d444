"""Stratified k-fold cross-validation and the accuracy / top-two / p_s-error metrics."""
from __future__ import annotations

import csv
import io
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dataset import DatasetRecord
from ..solvers.config import PRIORITY
from .models import CLASSIFIERS, N_CLASSES, TrainingError
from .pipeline import DEFAULT_PREPROCESSING, PipelineSpec, fit_pipeline
from .preprocess import PreprocessError


@dataclass(frozen=True)
class LabeledData:
    """Feature matrix, integer labels, and the per-solver score and p_s columns (priority order)."""

    X: np.ndarray
    y: np.ndarray
    scores: np.ndarray
    ps: np.ndarray

    def __post_init__(self) -> None:
        n = self.X.shape[0]
        for name, arr in (("scores", self.scores), ("ps", self.ps)):
            if arr.shape != (n, N_CLASSES):
                raise ValueError(f"{name}: expected shape ({n}, {N_CLASSES}), got {arr.shape}")
        if self.y.shape != (n,):
            raise ValueError("one label per row required")

    @classmethod
    def from_records(cls, records: Sequence[DatasetRecord]) -> "LabeledData":
        if not records:
            raise ValueError("empty dataset")
        return cls(
            np.array([r.features.as_array() for r in records]),
            np.array([r.label.priority_rank - 1 for r in records], dtype=np.int64),
            np.array([[r.scores[k] for k in PRIORITY] for r in records], dtype=float),
            np.array([[r.ps[k] for k in PRIORITY] for r in records], dtype=float),
        )

    def top_two(self) -> np.ndarray:
        """Indices of the two best true scores per row; equal scores ordered by priority."""
        order = np.argsort(self.scores, axis=1, kind="stable")
        return order[:, :2]


def stratified_kfold(y, k: int = 5, seed: int = 0) -> list[np.ndarray]:
    """Shuffle each class, then deal its members round-robin onto the folds.

    The dealing pointer carries over from one class to the next, which keeps
    fold sizes within one of each other.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    y = np.asarray(y)
    if len(y) < k:
        raise ValueError(f"{len(y)} samples cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    ptr = 0
    for c in np.unique(y):
        members = np.nonzero(y == c)[0]
        if len(members) < k:
            warnings.warn(f"class {c} has {len(members)} < {k} members; some folds will lack it", stacklevel=2)
        for i in rng.permutation(members):
            folds[ptr % k].append(int(i))
            ptr += 1
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass(frozen=True)
class FoldMetrics:
    accuracy: float
    top2_rate: float
    avg_ps_error: float
    size: int


def fold_metrics(pred: np.ndarray, data: LabeledData, idx: np.ndarray) -> FoldMetrics:
    y = data.y[idx]
    top = data.top_two()[idx]
    rows = np.arange(len(idx))
    ps = data.ps[idx]
    return FoldMetrics(
        accuracy=float(np.mean(pred == y)),
        top2_rate=float(np.mean((top == pred[:, None]).any(axis=1))),
        avg_ps_error=float(np.mean(np.abs(ps[rows, y] - ps[rows, pred]))),
        size=len(idx),
    )


@dataclass(frozen=True)
class EvalReport:
    folds: tuple[FoldMetrics, ...]
    confusion: np.ndarray  # rows: true label, columns: predicted

    @property
    def accuracy(self) -> float:
        return float(np.mean([f.accuracy for f in self.folds]))

    @property
    def top2_rate(self) -> float:
        return float(np.mean([f.top2_rate for f in self.folds]))

    @property
    def avg_ps_error(self) -> float:
        return float(np.mean([f.avg_ps_error for f in self.folds]))


def fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([seed, fold]).generate_state(1)[0])


def cross_validate(data: LabeledData, spec: PipelineSpec, k: int = 5, seed: int = 0,
                   resubstitution: bool = False) -> EvalReport:
    """Mean fold metrics of ``spec``.

    ``resubstitution`` trains and tests on the full data once; it is only a
    sanity mode for checking the metric plumbing.
    """
    if resubstitution:
        splits = [np.arange(len(data.y))]
    else:
        splits = stratified_kfold(data.y, k, seed)
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    folds = []
    everything = np.arange(len(data.y))
    for i, test in enumerate(splits):
        if len(test) == 0:
            continue
        train_idx = everything if resubstitution else np.setdiff1d(everything, test)
        model = fit_pipeline(spec, data.X[train_idx], data.y[train_idx], fold_seed(seed, i))
        pred = model.predict(data.X[test])
        np.add.at(confusion, (data.y[test], pred), 1)
        folds.append(fold_metrics(pred, data, test))
    return EvalReport(tuple(folds), confusion)


def majority_baseline(data: LabeledData, k: int = 5, seed: int = 0) -> float:
    """Mean fold accuracy of always predicting the training fold's most common label."""
    accs = []
    everything = np.arange(len(data.y))
    for test in stratified_kfold(data.y, k, seed):
        train_idx = np.setdiff1d(everything, test)
        guess = int(np.argmax(np.bincount(data.y[train_idx], minlength=N_CLASSES)))
        accs.append(float(np.mean(data.y[test] == guess)))
    return float(np.mean(accs))


@dataclass(frozen=True)
class GridRow:
    model: str
    preprocessing: str
    report: EvalReport | None
    note: str = ""


def _grid_cell(args) -> GridRow:
    data, classifier, prep, k, seed, hyper = args
    projection, dim = PipelineSpec.parse_preprocessing(prep)
    spec = PipelineSpec(classifier, projection, dim, hyper.get(classifier, {}))
    try:
        return GridRow(classifier, spec.preprocessing, cross_validate(data, spec, k, seed))
    except (PreprocessError, TrainingError) as exc:
        return GridRow(classifier, spec.preprocessing, None, str(exc))


def evaluate_grid(data: LabeledData, classifiers: Sequence[str] = CLASSIFIERS,
                  preprocessings: Sequence[str] = DEFAULT_PREPROCESSING, k: int = 5, seed: int = 0,
                  hyperparams: dict | None = None, jobs: int = 1) -> list[GridRow]:
    """One cross-validated row per (classifier, preprocessing); configurations that cannot
    be fitted (for instance LDA with k >= classes present) get a note instead of metrics."""
    hyper = hyperparams or {}
    cells = [(data, c, p, k, seed, hyper) for c in classifiers for p in preprocessings]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_grid_cell, cells))
    return [_grid_cell(c) for c in cells]


TABLE_HEADER = ["model", "preprocessing", "accuracy", "top2", "ps_err", "note"]


def grid_csv(rows: Sequence[GridRow]) -> str:
    """Percentages with two decimals, one row per configuration."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for r in rows:
        if r.report is None:
            writer.writerow([r.model, r.preprocessing, "", "", "", r.note])
        else:
            rep = r.report
            writer.writerow([r.model, r.preprocessing, f"{100 * rep.accuracy:.2f}",
                             f"{100 * rep.top2_rate:.2f}", f"{100 * rep.avg_ps_error:.2f}", ""])
    return buf.getvalue()
