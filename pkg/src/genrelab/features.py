"""Tokenization, count/TF-IDF vectorization, and per-class term scoring.

The contract (not any particular toolkit) is:

* tokens are lowercase runs of >= 2 word characters, so contractions split
  into fragments ("you're" -> "you", "re");
* vocabulary keeps the ``max_features`` most frequent terms by total corpus
  count (ties broken alphabetically), with dense indices in alphabetical
  order;
* idf_t = ln((1 + n_docs) / (1 + df_t)) + 1 (smoothed);
* TF-IDF transform applies raw term count x idf, then l2 normalization;
  the count transform emits raw counts with no idf and no normalization.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from genrelab.corpus import ClassLabel, Manifest
from genrelab.errors import DataError

#: Fixed, versioned token pattern; changing it changes the vocabulary of
#: every downstream artifact.
TOKEN_PATTERN = re.compile(r"\b\w\w+\b")

DEFAULT_MAX_FEATURES = 1000


def tokenize(text: str) -> list[str]:
    """Lowercase word unigrams; contraction parts survive as fragments."""
    return TOKEN_PATTERN.findall(text.lower())


@dataclass(frozen=True)
class Vocabulary:
    """Term-to-index map with per-term document frequencies."""

    index: dict[str, int]
    doc_freq: np.ndarray
    max_features: int

    def __post_init__(self):
        if len(self.index) > self.max_features:
            raise DataError(
                f"vocabulary size {len(self.index)} exceeds "
                f"max_features {self.max_features}"
            )

    def __len__(self) -> int:
        return len(self.index)

    @property
    def terms(self) -> list[str]:
        out = [""] * len(self.index)
        for term, idx in self.index.items():
            out[idx] = term
        return out


@dataclass(frozen=True)
class DocVector:
    """Sparse document representation: strictly increasing indices."""

    indices: np.ndarray
    weights: np.ndarray
    dim: int
    norm: str = "l2"

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.weights
        return dense


class _VectorizerBase:
    """Shared fitting logic for the count and TF-IDF vectorizers.

    ``tokenizer`` may be overridden for analysis and testing; serialized
    artifacts always assume the fixed default token pattern.
    """

    def __init__(self, vocabulary: Vocabulary, n_docs: int, tokenizer=tokenize):
        self.vocabulary = vocabulary
        self.n_docs = n_docs
        self.tokenizer = tokenizer

    def _count_row(self, text: str) -> np.ndarray:
        row = np.zeros(len(self.vocabulary))
        index = self.vocabulary.index
        for term, cnt in Counter(self.tokenizer(text)).items():
            idx = index.get(term)
            if idx is not None:
                row[idx] = cnt
        return row

    def transform_matrix(self, texts) -> np.ndarray:
        return np.array([self._weight_row(self._count_row(t)) for t in texts])

    def transform(self, text: str) -> DocVector:
        dense = self._weight_row(self._count_row(text))
        idx = np.nonzero(dense)[0]
        return DocVector(
            indices=idx, weights=dense[idx], dim=len(self.vocabulary), norm=self._norm
        )


def _build_vocabulary(texts, max_features: int, tokenizer=tokenize) -> tuple[Vocabulary, int]:
    total = Counter()
    doc_freq = Counter()
    n_docs = 0
    for text in texts:
        terms = tokenizer(text)
        n_docs += 1
        total.update(terms)
        doc_freq.update(set(terms))
    if not total:
        raise DataError("cannot fit a vectorizer on an all-empty corpus")
    # Most frequent by total corpus count, ties alphabetical; indices are
    # assigned in alphabetical order over the kept terms.
    kept = sorted(total, key=lambda t: (-total[t], t))[:max_features]
    kept.sort()
    index = {t: i for i, t in enumerate(kept)}
    df = np.array([doc_freq[t] for t in kept], dtype=float)
    return Vocabulary(index=index, doc_freq=df, max_features=max_features), n_docs


class CountModel(_VectorizerBase):
    """Raw term counts; no idf, no normalization."""

    _norm = "none"

    def _weight_row(self, counts: np.ndarray) -> np.ndarray:
        return counts

    def to_dict(self) -> dict:
        return {
            "kind": "count",
            "format_version": 1,
            "terms": self.vocabulary.terms,
            "doc_freq": self.vocabulary.doc_freq.tolist(),
            "max_features": self.vocabulary.max_features,
            "n_docs": self.n_docs,
        }


class TfIdfModel(_VectorizerBase):
    """Smoothed TF-IDF with l2 row normalization."""

    _norm = "l2"

    def __init__(self, vocabulary: Vocabulary, n_docs: int, tokenizer=tokenize):
        super().__init__(vocabulary, n_docs, tokenizer)
        self.idf = np.log((1.0 + n_docs) / (1.0 + vocabulary.doc_freq)) + 1.0
        if not np.all(np.isfinite(self.idf)):
            raise DataError("non-finite idf weights")

    def _weight_row(self, counts: np.ndarray) -> np.ndarray:
        row = counts * self.idf
        norm = np.linalg.norm(row)
        if norm > 0:
            row = row / norm
        return row

    def to_dict(self) -> dict:
        return {
            "kind": "tfidf",
            "format_version": 1,
            "terms": self.vocabulary.terms,
            "doc_freq": self.vocabulary.doc_freq.tolist(),
            "max_features": self.vocabulary.max_features,
            "n_docs": self.n_docs,
        }


def fit_tfidf(
    texts, max_features: int = DEFAULT_MAX_FEATURES, tokenizer=tokenize
) -> TfIdfModel:
    vocab, n_docs = _build_vocabulary(texts, max_features, tokenizer)
    return TfIdfModel(vocab, n_docs, tokenizer)


def fit_count(
    texts, max_features: int = DEFAULT_MAX_FEATURES, tokenizer=tokenize
) -> CountModel:
    vocab, n_docs = _build_vocabulary(texts, max_features, tokenizer)
    return CountModel(vocab, n_docs, tokenizer)


def save_vectorizer(model, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict()), encoding="utf-8")


def load_vectorizer(path):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    vocab = Vocabulary(
        index={t: i for i, t in enumerate(data["terms"])},
        doc_freq=np.array(data["doc_freq"], dtype=float),
        max_features=data["max_features"],
    )
    cls = {"count": CountModel, "tfidf": TfIdfModel}.get(data.get("kind"))
    if cls is None:
        raise DataError(f"unknown vectorizer kind {data.get('kind')!r}")
    return cls(vocab, data["n_docs"])


def vocabulary_hash(model) -> str:
    import hashlib

    return hashlib.sha256("\x00".join(model.vocabulary.terms).encode()).hexdigest()[:16]


def class_characterization(
    m: Manifest, k: int, max_features: int = DEFAULT_MAX_FEATURES
) -> dict[ClassLabel, list[tuple[str, float]]]:
    """Top-k terms per class, scored tf(class) x idf(full corpus).

    Each class's documents are pooled into one pseudo-document; idf comes
    from per-document frequencies over the whole corpus, so terms spread
    uniformly across classes sink while class-specific residue or jargon
    rises.  Classes without documents are omitted with a warning.
    """
    import logging

    if k < 1:
        raise DataError(f"class_characterization: k must be >= 1, got {k}")
    texts = [d.text for d in m.documents]
    model = fit_tfidf(texts, max_features=max_features)
    terms = model.vocabulary.terms
    out: dict[ClassLabel, list[tuple[str, float]]] = {}
    for label in ClassLabel:
        class_texts = [d.text for d in m.documents if d.label == label]
        if not class_texts:
            logging.getLogger(__name__).warning(
                "class %s has no documents; omitted", label.slug
            )
            continue
        pooled = model._count_row(" ".join(class_texts))
        scores = pooled * model.idf
        order = np.argsort(-scores, kind="stable")[:k]
        out[label] = [(terms[i], float(scores[i])) for i in order if scores[i] > 0]
    return out
