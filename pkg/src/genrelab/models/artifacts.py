"""Versioned JSON serialization for fitted models.

Every artifact records a format version, the hash of the vocabulary it was
trained against, and the training config, so stale model/vectorizer pairs
are rejected at load time instead of silently mis-scoring.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from genrelab.errors import DataError

FORMAT_VERSION = 1


def _model_to_dict(model):
    return model.to_dict()


def _model_from_dict(data):
    from genrelab.models.boost import BoostModel
    from genrelab.models.calibrate import CalibratedModel
    from genrelab.models.forest import ForestModel
    from genrelab.models.linear import LinearModel

    kind = data.get("kind")
    if kind == "linear":
        return LinearModel.from_dict(data)
    if kind == "forest":
        return ForestModel.from_dict(data)
    if kind == "boost":
        return BoostModel.from_dict(data)
    if kind == "calibrated":
        return CalibratedModel(
            base=_model_from_dict(data["base"]),
            fold_params=[
                (np.array(fp["A"]), np.array(fp["B"]))
                for fp in data["fold_params"]
            ],
            folds=data["folds"],
        )
    raise DataError(f"unknown model kind {kind!r}")


def save_model(model, path, vocabulary_hash: str = "", config: dict | None = None) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "vocabulary_hash": vocabulary_hash,
        "config": config or {},
        "model": _model_to_dict(model),
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_model(path, expected_vocabulary_hash: str | None = None):
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"unsupported model format version {payload.get('format_version')!r}"
        )
    if (
        expected_vocabulary_hash is not None
        and payload.get("vocabulary_hash")
        and payload["vocabulary_hash"] != expected_vocabulary_hash
    ):
        raise DataError(
            "model was trained against a different vocabulary "
            f"({payload['vocabulary_hash']} != {expected_vocabulary_hash})"
        )
    return _model_from_dict(payload["model"]), payload
