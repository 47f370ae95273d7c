"""Synthetic four-styles corpus generator for benchmarks and protocol tests.

The real corpus cannot be redistributed, so the benchmark suite runs on a
generated stand-in with the property that matters: style markers are
independent of topic words.  Each class owns a pool of marker tokens that
appear at an elevated rate in its documents (with cross-class noise), all
classes share filler tokens, and every topic contributes topic tokens that
are identical across classes.  Because a topic's tokens never encode the
class, a model that learns the style markers generalizes to topics it has
never seen.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from genrelab.corpus import ClassLabel, Document, Manifest


@dataclass(frozen=True)
class SynthConfig:
    n_docs: int = 2000
    topics: tuple[str, ...] = (
        "abortion", "dementia", "inflammation", "stroke", "vaccination",
    )
    doc_len: tuple[int, int] = (60, 120)
    n_markers_per_class: int = 100
    n_filler: int = 120
    n_topic_words: int = 30
    marker_rate: float = 0.25
    topic_rate: float = 0.25
    style_noise: float = 0.36  # share of marker draws taken from a wrong class
    marker_decay: float = 0.62  # weight exponent: 0 = uniform pool, 1 = steep


def _marker(label: ClassLabel, j: int) -> str:
    return f"style{int(label)}m{j:02d}"


def _topic_word(topic: str, j: int) -> str:
    return f"topic{topic.replace(' ', '')}w{j:02d}"


def generate_four_styles(cfg: SynthConfig = SynthConfig(), seed: int = 0) -> Manifest:
    """Balanced manifest of ``n_docs`` synthetic documents.

    Labels and topics are assigned round-robin so every (topic, class)
    cell has equal count when ``n_docs`` divides evenly.
    """
    rng = random.Random(seed)
    labels = list(ClassLabel)
    markers = {
        label: [_marker(label, j) for j in range(cfg.n_markers_per_class)]
        for label in labels
    }
    filler = [f"common{j:03d}" for j in range(cfg.n_filler)]
    topic_words = {
        t: [_topic_word(t, j) for j in range(cfg.n_topic_words)] for t in cfg.topics
    }

    # Zipf-ish weights: how steeply a class leans on its top markers sets
    # the difficulty gap between linear models and shallow stump ensembles.
    weights = [1.0 / (r + 1) ** cfg.marker_decay for r in range(cfg.n_markers_per_class)]
    docs = []
    for i in range(cfg.n_docs):
        label = labels[i % len(labels)]
        topic = cfg.topics[(i // len(labels)) % len(cfg.topics)]
        own = markers[label]
        tokens = []
        for _ in range(rng.randint(*cfg.doc_len)):
            u = rng.random()
            if u < cfg.marker_rate:
                if rng.random() < cfg.style_noise:
                    other = rng.choice([l for l in labels if l != label])
                    tokens.append(rng.choices(markers[other], weights=weights)[0])
                else:
                    tokens.append(rng.choices(own, weights=weights)[0])
            elif u < cfg.marker_rate + cfg.topic_rate:
                tokens.append(rng.choice(topic_words[topic]))
            else:
                tokens.append(rng.choice(filler))
        text = " ".join(tokens)
        docs.append(
            Document(
                id=f"synth-{i:05d}",
                label=label,
                topic=topic,
                source=f"synthetic-{label.slug}",
                raw_text=text,
                clean_text=text,
                retrieved_at="2025-01-01",
            )
        )
    return Manifest(documents=tuple(docs), version="synthetic", seed=seed)


def with_holdout_topic(
    cfg: SynthConfig = SynthConfig(), seed: int = 0, holdout_topic: str = "pandemics"
) -> tuple[Manifest, Manifest, str]:
    """A training manifest plus a test manifest containing a topic whose
    vocabulary is disjoint from everything seen in training.

    Returns (train_manifest, test_manifest, holdout_topic).  The test
    manifest mixes in-topic and holdout-topic documents in equal parts.
    """
    assert holdout_topic not in cfg.topics
    train = generate_four_styles(cfg, seed=seed)

    n_test = max(len(ClassLabel) * 25, cfg.n_docs // 5)
    in_cfg = SynthConfig(**{**cfg.__dict__, "n_docs": n_test})
    out_cfg = SynthConfig(**{**cfg.__dict__, "n_docs": n_test, "topics": (holdout_topic,)})
    in_docs = generate_four_styles(in_cfg, seed=seed + 1).documents
    out_docs = generate_four_styles(out_cfg, seed=seed + 2).documents
    renamed = []
    for j, d in enumerate(in_docs + out_docs):
        renamed.append(
            Document(
                id=f"synthtest-{j:05d}",
                label=d.label,
                topic=d.topic,
                source=d.source,
                raw_text=d.raw_text,
                clean_text=d.clean_text,
                retrieved_at=d.retrieved_at,
            )
        )
    test = Manifest(documents=tuple(renamed), version="synthetic", seed=seed)
    return train, test, holdout_topic
