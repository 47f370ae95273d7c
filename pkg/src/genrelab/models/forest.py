"""Random forest with Gini splits on bootstrap samples.

Each tree draws a bootstrap of exactly n rows and examines
floor(sqrt(n_features)) candidate features per split.  Per-tree seeds are
derived as master_seed XOR tree_index, so trees can be trained in any
order (or in parallel) with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from genrelab.errors import DataError

N_CLASSES = 4


@dataclass
class Leaf:
    histogram: np.ndarray  # per-class sample counts, never all-zero

    def to_dict(self):
        return {"histogram": self.histogram.tolist()}


@dataclass
class Node:
    feature: int
    threshold: float
    left: Union["Node", Leaf]
    right: Union["Node", Leaf]

    def to_dict(self):
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }


def _node_from_dict(data) -> Union[Node, Leaf]:
    if "histogram" in data:
        return Leaf(histogram=np.array(data["histogram"], dtype=float))
    return Node(
        feature=data["feature"],
        threshold=data["threshold"],
        left=_node_from_dict(data["left"]),
        right=_node_from_dict(data["right"]),
    )


def _gini_best_split(X, Y, feat_indices):
    """Best (feature, threshold, gain) over the candidate features.

    ``Y`` is the one-hot label matrix for the node's rows.  Returns None
    when no candidate feature admits a valid split.
    """
    n = X.shape[0]
    totals = Y.sum(axis=0)
    parent_gini = 1.0 - np.sum((totals / n) ** 2)
    best = None
    best_score = -np.inf
    for f in feat_indices:
        v = X[:, f]
        order = np.argsort(v, kind="stable")
        vs = v[order]
        valid = vs[:-1] < vs[1:]
        if not valid.any():
            continue
        left = np.cumsum(Y[order], axis=0)[:-1]
        n_left = np.arange(1, n)
        n_right = n - n_left
        gini_left = 1.0 - np.sum(left**2, axis=1) / n_left**2
        gini_right = 1.0 - np.sum((totals - left) ** 2, axis=1) / n_right**2
        weighted = (n_left * gini_left + n_right * gini_right) / n
        weighted[~valid] = np.inf
        i = int(np.argmin(weighted))
        score = parent_gini - weighted[i]
        if score > best_score + 1e-15:
            best_score = score
            best = (int(f), float((vs[i] + vs[i + 1]) / 2.0))
    if best is None or best_score <= 1e-12:
        return None
    return best


def _grow_tree(X, Y, rng, max_features, depth, max_depth) -> Union[Node, Leaf]:
    totals = Y.sum(axis=0)
    if (
        X.shape[0] < 2
        or np.count_nonzero(totals) == 1
        or (max_depth is not None and depth >= max_depth)
    ):
        return Leaf(histogram=totals)
    feat_indices = rng.choice(X.shape[1], size=max_features, replace=False)
    split = _gini_best_split(X, Y, feat_indices)
    if split is None:
        return Leaf(histogram=totals)
    f, thr = split
    mask = X[:, f] <= thr
    return Node(
        feature=f,
        threshold=thr,
        left=_grow_tree(X[mask], Y[mask], rng, max_features, depth + 1, max_depth),
        right=_grow_tree(X[~mask], Y[~mask], rng, max_features, depth + 1, max_depth),
    )


def tree_leaf_histogram(node: Union[Node, Leaf], x: np.ndarray) -> np.ndarray:
    while isinstance(node, Node):
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.histogram


@dataclass
class ForestModel:
    trees: list
    n_features: int
    master_seed: int
    max_features: int

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Mean of per-tree leaf class distributions."""
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise DataError(
                f"dimension mismatch: model has {self.n_features} features, "
                f"input has {X.shape[1]}"
            )
        out = np.zeros((X.shape[0], N_CLASSES))
        for tree in self.trees:
            for i in range(X.shape[0]):
                hist = tree_leaf_histogram(tree, X[i])
                out[i] += hist / hist.sum()
        return out / self.n_trees

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)

    def to_dict(self) -> dict:
        return {
            "kind": "forest",
            "n_features": self.n_features,
            "master_seed": self.master_seed,
            "max_features": self.max_features,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ForestModel":
        return cls(
            trees=[_node_from_dict(t) for t in data["trees"]],
            n_features=data["n_features"],
            master_seed=data["master_seed"],
            max_features=data["max_features"],
        )


def train_random_forest(
    X,
    y,
    n_trees: int = 100,
    seed: int = 0,
    max_depth: Optional[int] = None,
) -> ForestModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]} labels")
    if len(np.unique(y)) < 2:
        raise DataError("training labels contain a single class")
    n, d = X.shape
    Y = np.zeros((n, N_CLASSES))
    Y[np.arange(n), y] = 1.0
    max_features = max(1, int(np.floor(np.sqrt(d))))
    trees = []
    for i in range(n_trees):
        rng = np.random.default_rng(seed ^ i)
        rows = rng.integers(0, n, size=n)
        trees.append(_grow_tree(X[rows], Y[rows], rng, max_features, 0, max_depth))
    return ForestModel(
        trees=trees, n_features=d, master_seed=seed, max_features=max_features
    )
