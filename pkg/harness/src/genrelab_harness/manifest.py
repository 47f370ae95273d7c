"""Minimal reader for the corpus manifest JSONL external interface.

The manifest is produced by the companion corpus package: a header record
carrying ``version`` and ``seed`` followed by one record per document.
Only the fields this harness needs (id, label, clean_text) are required.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

N_LABELS = 4


@dataclass(frozen=True)
class DocRecord:
    id: str
    label: int
    text: str

    def __post_init__(self):
        if not 0 <= self.label < N_LABELS:
            raise ValueError(f"document {self.id!r}: label {self.label} out of range")


def read_manifest(path) -> list[DocRecord]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty manifest")
    header = json.loads(lines[0])
    if "version" not in header:
        raise ValueError(f"{path}: first record is not a manifest header")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        raw = json.loads(line)
        for field in ("id", "label", "clean_text"):
            if field not in raw:
                raise ValueError(f"{path}:{lineno}: record missing {field!r}")
        records.append(
            DocRecord(id=raw["id"], label=int(raw["label"]), text=raw["clean_text"])
        )
    return records
