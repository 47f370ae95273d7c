"""Stratified splitting, classification metrics, and the unseen-topic protocol.

Precision and recall use the zero-division-is-zero convention.  Weighted F1
is the support-weighted mean of per-class F1; macro F1 averages over all
four classes regardless of support.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from genrelab.corpus import ClassLabel, Document, Manifest
from genrelab.errors import DataError

N_CLASSES = len(ClassLabel)


@dataclass(frozen=True)
class Split:
    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    ratio: float
    stratify_by: str
    seed: int

    def __post_init__(self):
        overlap = set(self.train_ids) & set(self.test_ids)
        if overlap:
            raise DataError(f"split overlap: {sorted(overlap)[:3]}")


def split(m: Manifest, ratio: float, stratify_by: str = "class", seed: int = 0) -> Split:
    """Deterministic stratified split; ``stratify_by`` is class or class+topic."""
    if not 0.0 < ratio < 1.0:
        raise DataError(f"split ratio must be in (0, 1), got {ratio}")
    if stratify_by not in ("class", "class+topic"):
        raise DataError(f"unknown stratification key {stratify_by!r}")

    strata: dict[tuple, list[str]] = {}
    for d in m.documents:
        key = (d.label,) if stratify_by == "class" else (d.label, d.topic)
        strata.setdefault(key, []).append(d.id)

    rng = np.random.default_rng(seed)
    train: list[str] = []
    test: list[str] = []
    for key in sorted(strata):
        ids = sorted(strata[key])
        if len(ids) < 2:
            raise DataError(f"stratum {key} has fewer than 2 documents")
        perm = rng.permutation(len(ids))
        n_train = int(round(ratio * len(ids)))
        n_train = min(max(n_train, 1), len(ids) - 1)
        train += [ids[i] for i in perm[:n_train]]
        test += [ids[i] for i in perm[n_train:]]
    return Split(
        train_ids=tuple(train), test_ids=tuple(test),
        ratio=ratio, stratify_by=stratify_by, seed=seed,
    )


@dataclass(frozen=True)
class MetricsReport:
    precision: dict[ClassLabel, float]
    recall: dict[ClassLabel, float]
    f1: dict[ClassLabel, float]
    support: dict[ClassLabel, int]
    accuracy: float
    macro_f1: float
    weighted_f1: float
    confusion: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "per_class": {
                label.slug: {
                    "precision": self.precision[label],
                    "recall": self.recall[label],
                    "f1": self.f1[label],
                    "support": self.support[label],
                }
                for label in ClassLabel
            },
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "confusion": self.confusion.tolist(),
        }

    def to_markdown(self) -> str:
        lines = [
            "| class | precision | recall | F1 | support |",
            "|---|---|---|---|---|",
        ]
        for label in ClassLabel:
            lines.append(
                f"| {label.slug} | {self.precision[label]:.4f} "
                f"| {self.recall[label]:.4f} | {self.f1[label]:.4f} "
                f"| {self.support[label]} |"
            )
        lines.append(
            f"\naccuracy {self.accuracy:.4f}, macro-F1 {self.macro_f1:.4f}, "
            f"weighted-F1 {self.weighted_f1:.4f}"
        )
        return "\n".join(lines)


def confusion_matrix(y_true: Sequence[int], y_pred: Sequence[int]) -> np.ndarray:
    cm = np.zeros((N_CLASSES, N_CLASSES), dtype=int)
    for t, p in zip(y_true, y_pred):
        cm[int(t), int(p)] += 1
    return cm


def metrics_from_confusion(cm: np.ndarray) -> MetricsReport:
    cm = np.asarray(cm, dtype=int)
    tp = np.diag(cm).astype(float)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(predicted > 0, tp / np.maximum(predicted, 1), 0.0)
        recall = np.where(support > 0, tp / np.maximum(support, 1), 0.0)
        denom = precision + recall
        f1 = np.where(denom > 0, 2 * precision * recall / np.maximum(denom, 1e-300), 0.0)
    n = cm.sum()
    accuracy = float(tp.sum() / n)
    weighted_f1 = float((support * f1).sum() / n)
    macro_f1 = float(f1.mean())
    labels = list(ClassLabel)
    return MetricsReport(
        precision={lbl: float(precision[i]) for i, lbl in enumerate(labels)},
        recall={lbl: float(recall[i]) for i, lbl in enumerate(labels)},
        f1={lbl: float(f1[i]) for i, lbl in enumerate(labels)},
        support={lbl: int(support[i]) for i, lbl in enumerate(labels)},
        accuracy=accuracy,
        macro_f1=macro_f1,
        weighted_f1=weighted_f1,
        confusion=cm,
    )


def compute_metrics(y_true: Sequence[int], y_pred: Sequence[int]) -> MetricsReport:
    if len(y_true) != len(y_pred):
        raise DataError(
            f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted"
        )
    if len(y_true) == 0:
        raise DataError("compute_metrics: empty input")
    for value in list(y_true) + list(y_pred):
        ClassLabel.from_code(int(value))
    return metrics_from_confusion(confusion_matrix(y_true, y_pred))


@dataclass(frozen=True)
class UnseenTopicReport:
    in_topic: MetricsReport
    unseen_topic: MetricsReport

    @property
    def f1_deltas(self) -> dict[ClassLabel, float]:
        return {
            label: self.unseen_topic.f1[label] - self.in_topic.f1[label]
            for label in ClassLabel
        }

    @property
    def weighted_f1_delta(self) -> float:
        return self.unseen_topic.weighted_f1 - self.in_topic.weighted_f1

    def to_dict(self) -> dict:
        return {
            "in_topic": self.in_topic.to_dict(),
            "unseen_topic": self.unseen_topic.to_dict(),
            "f1_deltas": {l.slug: v for l, v in self.f1_deltas.items()},
            "weighted_f1_delta": self.weighted_f1_delta,
        }


def unseen_topic_eval(
    predict: Callable[[Iterable[Document]], Sequence[int]],
    train_manifest: Manifest,
    heldout_topics: Iterable[str],
    test_manifest: Manifest,
) -> UnseenTopicReport:
    """Paired metrics on in-topic and held-out-topic test documents.

    ``predict`` maps documents to class codes.  Any held-out topic found in
    the training manifest is leakage and raises.
    """
    heldout = {t.lower() for t in heldout_topics}
    leaked = heldout & train_manifest.topics()
    if leaked:
        raise DataError(f"topic leakage into training set: {sorted(leaked)}")
    in_docs = [d for d in test_manifest.documents if d.topic not in heldout]
    out_docs = [d for d in test_manifest.documents if d.topic in heldout]
    if not in_docs or not out_docs:
        raise DataError(
            "unseen_topic_eval needs both in-topic and held-out-topic test documents"
        )
    reports = []
    for docs in (in_docs, out_docs):
        y_true = [int(d.label) for d in docs]
        y_pred = [int(p) for p in predict(docs)]
        reports.append(compute_metrics(y_true, y_pred))
    return UnseenTopicReport(in_topic=reports[0], unseen_topic=reports[1])
