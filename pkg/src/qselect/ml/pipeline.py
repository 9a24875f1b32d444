"""scale -> project -> classify, and the JSON model file."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..solvers.config import PRIORITY
from .models import CLASSIFIERS, MODEL_TYPES, N_CLASSES, TrainingError, check_dimension, train
from .preprocess import MinMaxScaler, Projection, fit_lda, fit_pca

FORMAT_VERSION = 1
CLASS_NAMES = tuple(k.value for k in PRIORITY)
PCA_KS = (2, 3, 4, 9)
LDA_KS = (2, 3, 4)


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineSpec:
    classifier: str = "random_forest"
    projection: str = "none"
    k: int | None = None
    hyperparams: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.classifier not in CLASSIFIERS:
            raise TrainingError(f"unknown classifier {self.classifier!r}; choose from {', '.join(CLASSIFIERS)}")
        if self.projection not in ("none", "pca", "lda"):
            raise TrainingError(f"unknown projection {self.projection!r}")
        if (self.projection == "none") != (self.k is None):
            raise TrainingError("a projection needs k; 'none' takes no k")

    @property
    def preprocessing(self) -> str:
        return "none" if self.projection == "none" else f"{self.projection}-{self.k}"

    @staticmethod
    def parse_preprocessing(text: str) -> tuple[str, int | None]:
        """'none', 'pca-4', 'lda2' -> (projection, k)."""
        text = text.strip().lower()
        if text in ("none", ""):
            return "none", None
        m = re.fullmatch(r"(pca|lda)-?(\d+)", text)
        if not m:
            raise TrainingError(f"bad preprocessing {text!r}; use none, pca-K or lda-K")
        return m.group(1), int(m.group(2))


DEFAULT_PREPROCESSING = ("none",) + tuple(f"pca-{k}" for k in PCA_KS) + tuple(f"lda-{k}" for k in LDA_KS)


@dataclass(frozen=True)
class TrainedModel:
    spec: PipelineSpec
    scaler: MinMaxScaler
    projection: Projection
    classifier: object
    n_features: int

    def transform(self, X) -> np.ndarray:
        X = check_dimension(X, self.n_features)
        return self.projection.transform(self.scaler.transform(X))

    def predict_proba(self, X) -> np.ndarray:
        return self.classifier.predict_proba(self.transform(X))

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "classes": list(CLASS_NAMES),
            "n_features": self.n_features,
            "scaler": self.scaler.to_json(),
            "projection": self.projection.to_json(),
            "classifier": {
                "kind": self.spec.classifier,
                "hyperparams": self.spec.hyperparams,
                "params": self.classifier.params_json(),
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "TrainedModel":
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"format_version: expected {FORMAT_VERSION}, got {version!r}")
        try:
            if list(data["classes"]) != list(CLASS_NAMES):
                raise ModelFormatError(f"classes: expected {list(CLASS_NAMES)}")
            proj = Projection.from_json(data["projection"])
            clf = data["classifier"]
            kind = clf["kind"]
            if kind not in MODEL_TYPES:
                raise ModelFormatError(f"classifier.kind: unknown {kind!r}")
            spec = PipelineSpec(kind, proj.kind, None if proj.kind == "none" else proj.k, clf.get("hyperparams", {}))
            return cls(
                spec,
                MinMaxScaler.from_json(data["scaler"]),
                proj,
                MODEL_TYPES[kind].from_params(clf["params"], N_CLASSES),
                int(data["n_features"]),
            )
        except KeyError as exc:
            raise ModelFormatError(f"missing field {exc.args[0]!r}") from None


def fit_pipeline(spec: PipelineSpec, X, y, seed: int = 0) -> TrainedModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    scaler = MinMaxScaler.fit(X)
    Xs = scaler.transform(X)
    if spec.projection == "pca":
        proj = fit_pca(Xs, spec.k)
    elif spec.projection == "lda":
        proj = fit_lda(Xs, y, spec.k)
    else:
        proj = Projection.identity(X.shape[1])
    clf = train(spec.classifier, proj.transform(Xs), y, seed=seed, **spec.hyperparams)
    return TrainedModel(spec, scaler, proj, clf, X.shape[1])


def save_model(model: TrainedModel, path: str | Path) -> None:
    Path(path).write_text(model.dumps())


def load_model(path: str | Path) -> TrainedModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file is not JSON: {exc}") from None
    return TrainedModel.from_json(data)
