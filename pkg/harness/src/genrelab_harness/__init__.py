"""Sliding-window transformer harness for long-document genre classification."""

from genrelab_harness.embeddings import export_embeddings
from genrelab_harness.encoder import DocClassifier, TokenEncoder, sliding_forward
from genrelab_harness.manifest import DocRecord, read_manifest
from genrelab_harness.training import (
    FinetunedModel,
    TrainConfig,
    build_vocab,
    encode_text,
    finetune,
    weighted_f1,
)
from genrelab_harness.windows import CANONICAL_BUDGETS, WindowPlan, window_spans

__all__ = [
    "CANONICAL_BUDGETS", "WindowPlan", "window_spans",
    "TokenEncoder", "DocClassifier", "sliding_forward",
    "DocRecord", "read_manifest",
    "TrainConfig", "FinetunedModel", "finetune", "build_vocab", "encode_text",
    "weighted_f1", "export_embeddings",
]
