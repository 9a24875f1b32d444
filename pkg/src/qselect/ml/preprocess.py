"""Min-max scaling and linear projections (PCA, LDA)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

LDA_RIDGE = 1e-6


class PreprocessError(ValueError):
    pass


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise PreprocessError("need a non-empty 2-D feature matrix")
    return X


@dataclass(frozen=True)
class MinMaxScaler:
    minimum: np.ndarray
    maximum: np.ndarray

    @classmethod
    def fit(cls, X) -> "MinMaxScaler":
        X = _as_matrix(X)
        return cls(X.min(axis=0), X.max(axis=0))

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.maximum - self.minimum
        # constant columns have span 0 and map to 0
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (X - self.minimum) / safe, 0.0)

    def to_json(self) -> dict:
        return {"min": self.minimum.tolist(), "max": self.maximum.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "MinMaxScaler":
        return cls(np.asarray(data["min"], dtype=float), np.asarray(data["max"], dtype=float))


@dataclass(frozen=True)
class Projection:
    """x -> (x - mean) @ matrix. ``kind`` is "none", "pca" or "lda"."""

    kind: str
    mean: np.ndarray
    matrix: np.ndarray
    explained: np.ndarray | None = None

    @property
    def k(self) -> int:
        return int(self.matrix.shape[1])

    @classmethod
    def identity(cls, d: int) -> "Projection":
        return cls("none", np.zeros(d), np.eye(d))

    def transform(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.matrix

    def inverse_transform(self, Z) -> np.ndarray:
        return np.asarray(Z, dtype=float) @ self.matrix.T + self.mean

    def to_json(self) -> dict:
        out = {"kind": self.kind, "k": self.k, "mean": self.mean.tolist(), "matrix": self.matrix.tolist()}
        if self.explained is not None:
            out["explained"] = self.explained.tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Projection":
        matrix = np.asarray(data["matrix"], dtype=float)
        if matrix.ndim != 2 or matrix.shape[1] != data["k"]:
            raise PreprocessError("projection matrix does not match k")
        explained = data.get("explained")
        return cls(data["kind"], np.asarray(data["mean"], dtype=float), matrix,
                   None if explained is None else np.asarray(explained, dtype=float))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # eigenvectors are defined up to sign; make the largest entry of each positive
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def fit_pca(X, k: int) -> Projection:
    X = _as_matrix(X)
    d = X.shape[1]
    if not 1 <= k <= d:
        raise PreprocessError(f"PCA needs 1 <= k <= {d}, got {k}")
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / X.shape[0]
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = _fix_signs(vecs[:, order])
    total = vals.sum()
    ratios = vals / total if total > 0 else np.zeros_like(vals)
    return Projection("pca", mean, vecs[:, :k], ratios[:k])


def fit_lda(X, y, k: int) -> Projection:
    """Fisher discriminant directions: generalized eigenvectors of (S_b, S_w + ridge I)."""
    X = _as_matrix(X)
    y = np.asarray(y)
    if y.shape[0] != X.shape[0]:
        raise PreprocessError("labels and rows differ in length")
    classes, counts = np.unique(y, return_counts=True)
    if k < 1 or k > len(classes) - 1:
        raise PreprocessError(f"LDA needs 1 <= k <= classes - 1 = {len(classes) - 1}, got {k}")
    if k > X.shape[1]:
        raise PreprocessError(f"LDA k={k} exceeds feature count {X.shape[1]}")
    small = [str(c) for c, n in zip(classes, counts) if n < 2]
    if small:
        raise PreprocessError(f"LDA needs at least 2 samples per class; too few for class {', '.join(small)}")
    d = X.shape[1]
    mean = X.mean(axis=0)
    sw = LDA_RIDGE * np.eye(d)
    sb = np.zeros((d, d))
    for c in classes:
        Xc = X[y == c]
        mu = Xc.mean(axis=0)
        diff = Xc - mu
        sw += diff.T @ diff
        dm = (mu - mean)[:, None]
        sb += len(Xc) * (dm @ dm.T)
    vals, vecs = eigh(sb, sw)
    order = np.argsort(vals)[::-1][:k]
    return Projection("lda", mean, _fix_signs(vecs[:, order]), vals[order])
