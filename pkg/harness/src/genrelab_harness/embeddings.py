"""Embedding export in the clustering tool's JSONL external format.

One record per document: ``{"id": ..., "vector": [...]}``.  Vectors are
the penultimate-layer pooled document representations.
"""

from __future__ import annotations

import json
from pathlib import Path

from genrelab_harness.manifest import DocRecord
from genrelab_harness.training import FinetunedModel


def export_embeddings(records: list[DocRecord], model: FinetunedModel, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for d in records:
            vector = model.embed(d.text)
            fh.write(json.dumps({"id": d.id, "vector": vector.tolist()}) + "\n")
