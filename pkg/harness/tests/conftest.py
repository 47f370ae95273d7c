import json
import random

from genrelab_harness.manifest import DocRecord


def make_records(n_docs=120, doc_len=(40, 80), signal_start=0, marker_rate=0.3, seed=0):
    """Synthetic four-style documents with per-class marker tokens.

    Markers only appear at positions >= ``signal_start``; everything
    before that is shared filler, so truncating a document ahead of
    ``signal_start`` removes all class signal.
    """
    rng = random.Random(seed)
    filler = [f"filler{j:02d}" for j in range(40)]
    markers = {c: [f"mark{c}x{j:02d}" for j in range(10)] for c in range(4)}
    records = []
    for i in range(n_docs):
        label = i % 4
        tokens = []
        for pos in range(rng.randint(*doc_len)):
            if pos >= signal_start and rng.random() < marker_rate:
                tokens.append(rng.choice(markers[label]))
            else:
                tokens.append(rng.choice(filler))
        records.append(DocRecord(id=f"d{i:04d}", label=label, text=" ".join(tokens)))
    return records


def write_manifest_jsonl(records, path, version="1", seed=0):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"version": version, "seed": seed}) + "\n")
        for d in records:
            fh.write(
                json.dumps({"id": d.id, "label": d.label, "clean_text": d.text}) + "\n"
            )
