"""Fine-tuning loop: Adam, binary cross-entropy over 4 labels, 85/15 split.

Each document contributes one pooled sliding-window vector per optimizer
step.  Per-epoch validation metrics are recorded so budget comparisons
can read the trajectory, not just the endpoint.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from genrelab_harness.encoder import N_LABELS, DocClassifier
from genrelab_harness.manifest import DocRecord
from genrelab_harness.windows import WindowPlan

UNK = 0


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 4
    learning_rate: float = 3e-5
    train_fraction: float = 0.85
    batch_size: int = 8
    dim: int = 32
    seed: int = 0
    plan: WindowPlan = field(default_factory=WindowPlan)

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def build_vocab(texts) -> dict[str, int]:
    """Token-to-id map over whitespace tokens; id 0 is the unknown token."""
    vocab: dict[str, int] = {}
    for text in texts:
        for token in text.lower().split():
            if token not in vocab:
                vocab[token] = len(vocab) + 1
    return vocab


def encode_text(text: str, vocab: dict[str, int]) -> torch.Tensor:
    ids = [vocab.get(token, UNK) for token in text.lower().split()]
    return torch.tensor(ids, dtype=torch.long)


def weighted_f1(y_true, y_pred) -> float:
    """Support-weighted mean of per-label F1, zero-division-as-zero."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    total = 0.0
    for label in range(N_LABELS):
        tp = int(((y_true == label) & (y_pred == label)).sum())
        fp = int(((y_true != label) & (y_pred == label)).sum())
        fn = int(((y_true == label) & (y_pred != label)).sum())
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
        total += f1 * int((y_true == label).sum())
    return total / len(y_true)


@dataclass
class FinetunedModel:
    classifier: DocClassifier
    vocab: dict[str, int]
    plan: WindowPlan

    def embed(self, text: str) -> np.ndarray:
        ids = encode_text(text, self.vocab)
        with torch.no_grad():
            return self.classifier.embed(ids, self.plan).numpy()

    def predict(self, text: str) -> int:
        ids = encode_text(text, self.vocab)
        with torch.no_grad():
            return int(self.classifier(ids, self.plan).argmax())


def finetune(
    records: list[DocRecord], config: TrainConfig = TrainConfig()
) -> tuple[FinetunedModel, list[dict]]:
    """Train on an 85/15 split and report validation metrics per epoch.

    Returns the fitted model and a history of one record per epoch with
    ``epoch``, ``weighted_f1``, and ``accuracy`` keys.
    """
    if len(records) < 2:
        raise ValueError(f"finetune needs at least 2 documents, got {len(records)}")
    rng = random.Random(config.seed)
    order = list(range(len(records)))
    rng.shuffle(order)
    n_train = max(1, min(len(records) - 1, round(config.train_fraction * len(records))))
    train = [records[i] for i in order[:n_train]]
    val = [records[i] for i in order[n_train:]]

    vocab = build_vocab(d.text for d in train)
    torch.manual_seed(config.seed)
    model = DocClassifier(
        vocab_size=len(vocab) + 1, dim=config.dim, window_size=config.plan.window_size
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    bce = nn.BCEWithLogitsLoss()

    encoded_train = [(encode_text(d.text, vocab), d.label) for d in train]
    encoded_val = [(encode_text(d.text, vocab), d.label) for d in val]

    history = []
    for epoch in range(config.epochs):
        rng.shuffle(encoded_train)
        model.train()
        for i in range(0, len(encoded_train), config.batch_size):
            batch = encoded_train[i : i + config.batch_size]
            optimizer.zero_grad()
            logits = torch.stack([model(ids, config.plan) for ids, _ in batch])
            targets = torch.zeros(len(batch), N_LABELS)
            for row, (_, label) in enumerate(batch):
                targets[row, label] = 1.0
            loss = bce(logits, targets)
            loss.backward()
            optimizer.step()

        model.eval()
        y_true = [label for _, label in encoded_val]
        with torch.no_grad():
            y_pred = [int(model(ids, config.plan).argmax()) for ids, _ in encoded_val]
        history.append(
            {
                "epoch": epoch + 1,
                "weighted_f1": weighted_f1(y_true, y_pred),
                "accuracy": float(np.mean(np.asarray(y_true) == np.asarray(y_pred))),
            }
        )
    return FinetunedModel(classifier=model, vocab=vocab, plan=config.plan), history
