"""Explainability reports: forest decision-rule term counts and linear
top-feature rankings.

A term's forest count is the number of internal nodes (across all trees)
that split on it.  Its class direction is accumulated from the high side
of each such split: the subtree reached when the feature value exceeds the
threshold contributes its normalized leaf-histogram mass, the low side
subtracts it, so a positive score means "more of this term pushes toward
that class".
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from genrelab.corpus import ClassLabel
from genrelab.errors import DataError
from genrelab.features import Vocabulary
from genrelab.models.forest import ForestModel, Leaf, Node
from genrelab.models.linear import LinearModel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TermRuleCount:
    term: str
    count: int
    class_direction: dict[ClassLabel, float]

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "count": self.count,
            "class_direction": {l.slug: v for l, v in self.class_direction.items()},
        }


def _subtree_histogram(node) -> np.ndarray:
    if isinstance(node, Leaf):
        return node.histogram
    return _subtree_histogram(node.left) + _subtree_histogram(node.right)


def _walk(node, counts, direction):
    if isinstance(node, Leaf):
        return
    counts[node.feature] = counts.get(node.feature, 0) + 1
    high = _subtree_histogram(node.right)
    low = _subtree_histogram(node.left)
    tendency = high / max(high.sum(), 1.0) - low / max(low.sum(), 1.0)
    direction[node.feature] = direction.get(node.feature, 0.0) + tendency
    _walk(node.left, counts, direction)
    _walk(node.right, counts, direction)


def extract_forest_rule_terms(
    forest: ForestModel, vocab: Vocabulary, k: int
) -> list[TermRuleCount]:
    """Terms ranked by split count (descending, ties lexicographic)."""
    if not forest.trees:
        raise DataError("cannot extract rules from an empty forest")
    if len(vocab) != forest.n_features:
        raise DataError(
            f"vocabulary size {len(vocab)} does not match forest features "
            f"{forest.n_features}"
        )
    counts: dict[int, int] = {}
    direction: dict[int, np.ndarray] = {}
    for tree in forest.trees:
        _walk(tree, counts, direction)
    terms = vocab.terms
    ranked = sorted(counts, key=lambda f: (-counts[f], terms[f]))
    return [
        TermRuleCount(
            term=terms[f],
            count=counts[f],
            class_direction={
                label: float(direction[f][int(label)]) for label in ClassLabel
            },
        )
        for f in ranked[:k]
    ]


def top_linear_features(
    model: LinearModel, vocab: Vocabulary, k: int
) -> dict[ClassLabel, dict[str, list[tuple[str, float]]]]:
    """Per class: the k most positive and k most negative (term, weight) pairs.

    Ties are broken lexicographically so the ranking is deterministic even
    for untrained all-zero weights.
    """
    if len(vocab) != model.n_features:
        raise DataError(
            f"vocabulary size {len(vocab)} does not match model features "
            f"{model.n_features}"
        )
    if k > len(vocab):
        warnings.warn(f"k={k} exceeds vocabulary size {len(vocab)}; clamping")
        k = len(vocab)
    terms = vocab.terms
    out = {}
    for label in ClassLabel:
        weights = model.W[int(label)]
        order = sorted(range(len(terms)), key=lambda i: (-weights[i], terms[i]))
        out[label] = {
            "positive": [(terms[i], float(weights[i])) for i in order[:k]],
            "negative": [(terms[i], float(weights[i])) for i in order[::-1][:k]],
        }
    return out


def rule_report_markdown(ranked: list[TermRuleCount]) -> str:
    lines = [
        "| term | rule count | " + " | ".join(l.slug for l in ClassLabel) + " |",
        "|---|---|" + "---|" * len(ClassLabel),
    ]
    for entry in ranked:
        dirs = " | ".join(
            f"{entry.class_direction[l]:+.2f}" for l in ClassLabel
        )
        lines.append(f"| {entry.term} | {entry.count} | {dirs} |")
    return "\n".join(lines)


def rule_report_json(ranked: list[TermRuleCount]) -> str:
    return json.dumps([entry.to_dict() for entry in ranked], indent=2)
