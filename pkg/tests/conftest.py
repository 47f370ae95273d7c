import numpy as np
import pytest

from genrelab.corpus import ClassLabel, Document, Manifest


def make_doc(i, label=ClassLabel.SCIENTIFIC, topic="stroke", text="some text", **kw):
    return Document(
        id=f"doc-{i:04d}",
        label=label,
        topic=topic,
        source=kw.pop("source", "testsrc"),
        raw_text=text,
        retrieved_at=kw.pop("retrieved_at", "2025-01-01"),
        **kw,
    )


@pytest.fixture
def small_manifest():
    """Sixteen documents, four per class, two topics."""
    docs = []
    i = 0
    for label in ClassLabel:
        for topic in ("stroke", "dementia"):
            for _ in range(2):
                docs.append(
                    make_doc(i, label=label, topic=topic, text=f"word{i} filler text")
                )
                i += 1
    return Manifest(documents=tuple(docs))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
