"""Classifiers: CART decision tree, random forest, k-nearest neighbours, Gaussian naive Bayes.

Labels are integer class indices ``0 .. n_classes-1``; probability vectors
always have ``n_classes`` entries and ``predict`` takes the argmax, so ties
go to the lowest index (the highest-priority solver).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..qubo import DimensionError

N_CLASSES = 5
CLASSIFIERS = ("random_forest", "decision_tree", "knn", "gaussian_nb")


class TrainingError(ValueError):
    pass


def _check_training(X, y, n_classes: int) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise TrainingError("need a non-empty 2-D feature matrix")
    if y.shape != (X.shape[0],):
        raise TrainingError("labels and rows differ in length")
    if y.min() < 0 or y.max() >= n_classes:
        raise TrainingError(f"labels must lie in 0..{n_classes - 1}")
    if len(np.unique(y)) < 2:
        raise TrainingError("training data contains a single class")
    return X, y


# ---------------------------------------------------------------- trees

@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 50
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    max_features: int | None = None  # None: every feature


@dataclass(frozen=True)
class Tree:
    """Flat node arrays; leaves have feature -1. Samples with x[feature] <= threshold go left."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    class_counts: np.ndarray

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if self.feature[node] >= 0:
                stack.append((int(self.left[node]), d + 1))
                stack.append((int(self.right[node]), d + 1))
        return best

    def leaves(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.nonzero(active)[0]
            nd = node[idx]
            go_left = X[idx, self.feature[nd]] <= self.threshold[nd]
            node[idx] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] >= 0
        return node

    def to_json(self) -> list[dict]:
        return [
            {"feature": int(f), "threshold": float(t), "left": int(lo), "right": int(hi),
             "class_counts": [int(c) for c in cc]}
            for f, t, lo, hi, cc in zip(self.feature, self.threshold, self.left, self.right, self.class_counts)
        ]

    @classmethod
    def from_json(cls, nodes: list[dict]) -> "Tree":
        return cls(
            np.array([n["feature"] for n in nodes], dtype=np.int64),
            np.array([n["threshold"] for n in nodes], dtype=float),
            np.array([n["left"] for n in nodes], dtype=np.int64),
            np.array([n["right"] for n in nodes], dtype=np.int64),
            np.array([n["class_counts"] for n in nodes], dtype=np.int64),
        )


def _best_split(X: np.ndarray, y: np.ndarray, idx: np.ndarray, features: np.ndarray,
                wanted: int, min_leaf: int, n_classes: int):
    """Lowest weighted Gini split over at least ``wanted`` non-constant features."""
    n = len(idx)
    best = (math.inf, -1, 0.0)
    examined = 0
    for f in features:
        xs_all = X[idx, f]
        if xs_all.min() == xs_all.max():
            continue
        examined += 1
        order = np.argsort(xs_all, kind="stable")
        xs = xs_all[order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y[idx[order]]] = 1.0
        left = np.cumsum(onehot, axis=0)[:-1]  # row i: first i+1 samples on the left
        total = left[-1] + onehot[-1]
        right = total - left
        nl = np.arange(1, n, dtype=float)
        nr = n - nl
        gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        weighted = (nl * gini_l + nr * gini_r) / n
        valid = (xs[:-1] < xs[1:]) & (nl >= min_leaf) & (nr >= min_leaf)
        if valid.any():
            weighted = np.where(valid, weighted, math.inf)
            i = int(np.argmin(weighted))
            if weighted[i] < best[0]:
                lo, hi = xs[i], xs[i + 1]
                thr = lo + (hi - lo) / 2
                if not lo <= thr < hi:
                    thr = lo
                best = (float(weighted[i]), int(f), float(thr))
        if examined >= wanted and best[1] >= 0:
            break
    return best


def build_tree(X: np.ndarray, y: np.ndarray, params: TreeParams = TreeParams(),
               rng: np.random.Generator | None = None, n_classes: int = N_CLASSES) -> Tree:
    """CART with Gini impurity. With ``max_features`` set, each split looks at a random feature subset."""
    d = X.shape[1]
    wanted = d if params.max_features is None else max(1, min(d, params.max_features))
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    counts: list[np.ndarray] = []

    def new_node(idx: np.ndarray) -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[idx], minlength=n_classes))
        return len(feature) - 1

    root = new_node(np.arange(len(y)))
    stack = [(root, np.arange(len(y)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        if depth >= params.max_depth or len(idx) < params.min_samples_split:
            continue
        if np.count_nonzero(counts[node]) < 2:
            continue
        order = np.arange(d) if rng is None or wanted == d else rng.permutation(d)
        _, f, thr = _best_split(X, y, idx, order, wanted, params.min_samples_leaf, n_classes)
        if f < 0:
            continue
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        feature[node], threshold[node] = f, thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))
    return Tree(
        np.array(feature, dtype=np.int64), np.array(threshold), np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64), np.array(counts, dtype=np.int64).reshape(-1, n_classes),
    )


# ---------------------------------------------------------------- classifiers

@dataclass(frozen=True)
class DecisionTree:
    tree: Tree
    n_classes: int = N_CLASSES
    kind: str = field(default="decision_tree", init=False)

    @classmethod
    def fit(cls, X, y, seed: int = 0, n_classes: int = N_CLASSES, max_depth: int = 50,
            min_samples_leaf: int = 1, min_samples_split: int = 2) -> "DecisionTree":
        X, y = _check_training(X, y, n_classes)
        params = TreeParams(max_depth, min_samples_leaf, min_samples_split)
        return cls(build_tree(X, y, params, None, n_classes), n_classes)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        c = self.tree.class_counts[self.tree.leaves(X)].astype(float)
        return c / c.sum(axis=1, keepdims=True)

    def params_json(self) -> dict:
        return {"nodes": self.tree.to_json()}

    @classmethod
    def from_params(cls, data: dict, n_classes: int) -> "DecisionTree":
        return cls(Tree.from_json(data["nodes"]), n_classes)


@dataclass(frozen=True)
class RandomForest:
    """Bootstrap-aggregated CART trees with sqrt(d) features per split; probabilities are vote fractions."""

    trees: tuple[Tree, ...]
    n_classes: int = N_CLASSES
    kind: str = field(default="random_forest", init=False)

    @classmethod
    def fit(cls, X, y, seed: int = 0, n_classes: int = N_CLASSES, n_trees: int = 100,
            max_depth: int = 50, min_samples_leaf: int = 1, min_samples_split: int = 2) -> "RandomForest":
        X, y = _check_training(X, y, n_classes)
        if n_trees < 1:
            raise TrainingError("a forest needs at least one tree")
        n, d = X.shape
        params = TreeParams(max_depth, min_samples_leaf, min_samples_split, max(1, int(math.sqrt(d))))
        trees = []
        for child in np.random.SeedSequence(seed).spawn(n_trees):
            rng = np.random.default_rng(child)
            boot = rng.integers(0, n, size=n)
            trees.append(build_tree(X[boot], y[boot], params, rng, n_classes))
        return cls(tuple(trees), n_classes)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((X.shape[0], self.n_classes))
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            votes[rows, np.argmax(tree.class_counts[tree.leaves(X)], axis=1)] += 1
        return votes / len(self.trees)

    def params_json(self) -> dict:
        return {"trees": [t.to_json() for t in self.trees]}

    @classmethod
    def from_params(cls, data: dict, n_classes: int) -> "RandomForest":
        return cls(tuple(Tree.from_json(t) for t in data["trees"]), n_classes)


@dataclass(frozen=True)
class KNearestNeighbors:
    points: np.ndarray
    labels: np.ndarray
    k: int = 5
    n_classes: int = N_CLASSES
    kind: str = field(default="knn", init=False)

    @classmethod
    def fit(cls, X, y, seed: int = 0, n_classes: int = N_CLASSES, k: int = 5) -> "KNearestNeighbors":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] == 0 or y.shape != (X.shape[0],):
            raise TrainingError("need a non-empty feature matrix with one label per row")
        if k < 1:
            raise TrainingError("k must be >= 1")
        return cls(X.copy(), y.copy(), k, n_classes)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        k = min(self.k, len(self.labels))
        d2 = ((X[:, None, :] - self.points[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        out = np.zeros((X.shape[0], self.n_classes))
        for row, nb in enumerate(nearest):
            out[row] = np.bincount(self.labels[nb], minlength=self.n_classes) / k
        return out

    def params_json(self) -> dict:
        return {"k": self.k, "points": self.points.tolist(), "labels": self.labels.tolist()}

    @classmethod
    def from_params(cls, data: dict, n_classes: int) -> "KNearestNeighbors":
        return cls(np.asarray(data["points"], dtype=float).reshape(len(data["labels"]), -1),
                   np.asarray(data["labels"], dtype=np.int64), int(data["k"]), n_classes)


@dataclass(frozen=True)
class GaussianNB:
    """Class-conditional independent Gaussians; absent classes get probability 0."""

    priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    n_classes: int = N_CLASSES
    kind: str = field(default="gaussian_nb", init=False)

    @classmethod
    def fit(cls, X, y, seed: int = 0, n_classes: int = N_CLASSES, var_smoothing: float = 1e-9) -> "GaussianNB":
        X, y = _check_training(X, y, n_classes)
        d = X.shape[1]
        eps = var_smoothing * max(float(X.var(axis=0).max()), 1.0)
        priors = np.bincount(y, minlength=n_classes) / len(y)
        means = np.zeros((n_classes, d))
        variances = np.ones((n_classes, d))
        for c in range(n_classes):
            Xc = X[y == c]
            if len(Xc):
                means[c] = Xc.mean(axis=0)
                variances[c] = Xc.var(axis=0) + eps
        return cls(priors, means, variances, n_classes)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.priors)
        ll = -0.5 * (np.log(2 * np.pi * self.variances)[None]
                     + (X[:, None, :] - self.means[None]) ** 2 / self.variances[None]).sum(axis=2)
        joint = ll + log_prior[None]
        joint -= joint.max(axis=1, keepdims=True)
        p = np.exp(joint)
        return p / p.sum(axis=1, keepdims=True)

    def params_json(self) -> dict:
        return {"priors": self.priors.tolist(), "means": self.means.tolist(), "variances": self.variances.tolist()}

    @classmethod
    def from_params(cls, data: dict, n_classes: int) -> "GaussianNB":
        return cls(np.asarray(data["priors"], dtype=float), np.asarray(data["means"], dtype=float),
                   np.asarray(data["variances"], dtype=float), n_classes)


MODEL_TYPES = {
    "random_forest": RandomForest,
    "decision_tree": DecisionTree,
    "knn": KNearestNeighbors,
    "gaussian_nb": GaussianNB,
}


def train(kind: str, X, y, seed: int = 0, n_classes: int = N_CLASSES, **hyperparams):
    if kind not in MODEL_TYPES:
        raise TrainingError(f"unknown classifier {kind!r}; choose from {', '.join(CLASSIFIERS)}")
    return MODEL_TYPES[kind].fit(X, y, seed=seed, n_classes=n_classes, **hyperparams)


def check_dimension(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != d:
        raise DimensionError(f"model expects {d} features, got {X.shape[-1]}")
    return X
