"""K-means over externally produced document embeddings.

Embeddings arrive as JSONL records ``{"id": ..., "vector": [...]}`` — this
module never computes neural embeddings itself.  Clusters are mapped to
classes by the bijection maximizing total agreement on the 4x4 contingency
matrix (Hungarian assignment; with k=4 an exhaustive permutation search
gives the same answer and is used as the test oracle).  An identity
mapping variant is also reported, since a fixed mapping is what makes some
untuned embedding models look near-zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from genrelab.corpus import ClassLabel
from genrelab.errors import DataError
from genrelab.evaluation import MetricsReport, metrics_from_confusion

N_CLASSES = 4


@dataclass(frozen=True)
class EmbeddingSet:
    ids: tuple[str, ...]
    vectors: np.ndarray  # (n, d)
    producer: str = ""

    def __post_init__(self):
        if self.vectors.ndim != 2 or len(self.ids) != self.vectors.shape[0]:
            raise DataError("embedding matrix shape does not match id list")
        if not np.all(np.isfinite(self.vectors)):
            raise DataError("non-finite embedding entries")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.ids)


def load_embeddings(path, producer: str = "") -> EmbeddingSet:
    ids = []
    vectors = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if "id" not in rec or "vector" not in rec:
            raise DataError(f"embedding record on line {lineno} lacks id/vector")
        ids.append(rec["id"])
        vectors.append(rec["vector"])
    if not ids:
        raise DataError(f"no embedding records in {path}")
    return EmbeddingSet(ids=tuple(ids), vectors=np.array(vectors, dtype=float), producer=producer)


def write_embeddings(E: EmbeddingSet, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc_id, vec in zip(E.ids, E.vectors):
            fh.write(json.dumps({"id": doc_id, "vector": vec.tolist()}) + "\n")


@dataclass(frozen=True)
class Clustering:
    centroids: np.ndarray          # (k, d)
    assignment: dict[str, int]
    inertia: float
    inertia_history: tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _kmeanspp_init(X: np.ndarray, k: int, rng) -> np.ndarray:
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(n)]
    d2 = np.sum((X - centroids[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[i] = X[rng.integers(n)]
            continue
        probs = d2 / total
        centroids[i] = X[rng.choice(n, p=probs)]
        d2 = np.minimum(d2, np.sum((X - centroids[i]) ** 2, axis=1))
    return centroids


def _lloyd(X: np.ndarray, centroids: np.ndarray, max_iter: int = 300):
    labels = None
    history = []
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        inertia = float(d2[np.arange(len(X)), new_labels].sum())
        history.append(inertia)
        for c in range(centroids.shape[0]):
            members = new_labels == c
            if members.any():
                centroids[c] = X[members].mean(axis=0)
            else:
                # empty cluster: reseed to the point farthest from its centroid
                far = int(d2[np.arange(len(X)), new_labels].argmax())
                centroids[c] = X[far]
                new_labels[far] = c
        if labels is not None and np.array_equal(labels, new_labels):
            break
        labels = new_labels
    d2 = ((X[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(len(X)), labels].sum())
    history.append(inertia)
    return centroids, labels, inertia, history


def kmeans(E: EmbeddingSet, k: int = 4, n_init: int = 10, seed: int = 0) -> Clustering:
    """Lloyd iterations from k-means++ starts; best of ``n_init`` by inertia."""
    if len(E) < k:
        raise DataError(f"{len(E)} points is fewer than k={k}")
    if E.dim < 1:
        raise DataError("embeddings must have dimension >= 1")
    X = E.vectors
    seeds = np.random.SeedSequence(seed).spawn(n_init)
    best = None
    for ss in seeds:
        rng = np.random.default_rng(ss)
        centroids = _kmeanspp_init(X.copy(), k, rng)
        centroids, labels, inertia, history = _lloyd(X, centroids)
        if best is None or inertia < best[2]:
            best = (centroids, labels, inertia, history)
    centroids, labels, inertia, history = best
    return Clustering(
        centroids=centroids,
        assignment={doc_id: int(c) for doc_id, c in zip(E.ids, labels)},
        inertia=inertia,
        inertia_history=tuple(history),
    )


def contingency(c: Clustering, labels: dict[str, ClassLabel]) -> np.ndarray:
    table = np.zeros((c.k, N_CLASSES), dtype=int)
    for doc_id, cluster in c.assignment.items():
        table[cluster, int(labels[doc_id])] += 1
    return table


def optimal_cluster_mapping(table: np.ndarray) -> dict[int, int]:
    """Cluster -> class bijection maximizing total agreement."""
    rows, cols = linear_sum_assignment(-table)
    return {int(r): int(c) for r, c in zip(rows, cols)}


def cluster_class_metrics(
    c: Clustering, labels: dict[str, ClassLabel], mapping: str = "optimal"
) -> MetricsReport:
    """Standard metrics after mapping clusters to classes.

    ``mapping`` is "optimal" (best bijection) or "identity" (cluster index
    taken as class code).
    """
    if c.k != N_CLASSES:
        raise DataError(f"k={c.k} does not match {N_CLASSES} classes")
    missing = [doc_id for doc_id in c.assignment if doc_id not in labels]
    if missing:
        raise DataError(f"unlabeled clustered documents (first: {missing[0]!r})")
    table = contingency(c, labels)
    if mapping == "optimal":
        cluster_to_class = optimal_cluster_mapping(table)
    elif mapping == "identity":
        cluster_to_class = {i: i for i in range(c.k)}
    else:
        raise DataError(f"unknown mapping {mapping!r}")
    cm = np.zeros((N_CLASSES, N_CLASSES), dtype=int)
    for doc_id, cluster in c.assignment.items():
        cm[int(labels[doc_id]), cluster_to_class[cluster]] += 1
    return metrics_from_confusion(cm)


def purity(c: Clustering, labels: dict[str, ClassLabel]) -> float:
    """Fraction of points whose cluster's majority label matches their own."""
    table = contingency(c, labels)
    return float(table.max(axis=1).sum() / table.sum())
