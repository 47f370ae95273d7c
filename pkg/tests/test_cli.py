import json

import pytest

from genrelab.cli import main
from genrelab.cluster import write_embeddings
from genrelab.corpus import load_manifest, write_manifest
from genrelab.synth import SynthConfig, generate_four_styles
from tests.test_citations import write_fixture
from tests.test_cluster import gaussian_blobs

FAST = SynthConfig(n_docs=120, doc_len=(20, 40), topics=("stroke", "dementia"))


@pytest.fixture(scope="module")
def manifest_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "manifest.jsonl"
    write_manifest(generate_four_styles(FAST, seed=0), path)
    return path


class TestExitCodes:
    def test_usage_error_is_1(self, capsys):
        assert main(["no-such-command"]) == 1

    def test_missing_required_flag_is_1(self, capsys):
        assert main(["clean", "--out", "x.jsonl"]) == 1

    def test_data_error_is_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"version": "1", "seed": 0}\n{"id": "a"}\n')
        assert main(["clean", "--manifest", str(bad),
                     "--out", str(tmp_path / "o.jsonl")]) == 2

    def test_missing_file_is_2(self, tmp_path, capsys):
        assert main(["clean", "--manifest", str(tmp_path / "nope.jsonl"),
                     "--out", str(tmp_path / "o.jsonl")]) == 2

    def test_external_error_is_3(self, tmp_path, capsys):
        # fixture dir exists but the esummary payload is malformed
        write_fixture(tmp_path, "entrez", "1", {"result": "oops"})
        pmids = tmp_path / "pmids.txt"
        pmids.write_text("1\n")
        assert main(["enrich", "--pmids", str(pmids),
                     "--fixtures", str(tmp_path),
                     "--fetched-at", "2025-06-01",
                     "--out", str(tmp_path / "o.jsonl")]) == 3


class TestPipeline:
    def test_ingest_clean_balance(self, tmp_path, capsys):
        root = tmp_path / "raw" / "journal"
        root.mkdir(parents=True)
        (root / "a.txt").write_text("One article.  Sign up")
        (root / "b.txt").write_text("Another article.")
        registry = tmp_path / "registry.json"
        registry.write_text(json.dumps({
            "sources": [{"name": "journal", "label": "scientific",
                         "config": {"topic": "stroke"}}]
        }))
        out = tmp_path / "raw.jsonl"
        assert main(["ingest", "--registry", str(registry),
                     "--input-root", str(tmp_path / "raw"),
                     "--retrieved-at", "2025-01-01", "--out", str(out)]) == 0
        m = load_manifest(out)
        assert len(m) == 2

        cleaned = tmp_path / "clean.jsonl"
        assert main(["clean", "--manifest", str(out), "--out", str(cleaned)]) == 0
        cm = load_manifest(cleaned)
        assert all("Sign up" not in d.clean_text for d in cm.documents)

    def test_balance_command(self, manifest_path, tmp_path, capsys):
        topics = tmp_path / "topics.txt"
        topics.write_text("stroke\ndementia\n")
        out = tmp_path / "balanced.jsonl"
        assert main(["balance", "--manifest", str(manifest_path),
                     "--topics", str(topics), "--out", str(out)]) == 0
        balanced = load_manifest(out)
        assert len(balanced) > 0
        assert len(balanced) % 8 == 0  # 4 classes x 2 topics, equal cells

    def test_enrich_command(self, tmp_path, capsys):
        write_fixture(tmp_path, "entrez", "12345", {
            "result": {"12345": {"articleids": [
                {"idtype": "doi", "value": "10.1000/demo.1"}]}}
        })
        write_fixture(tmp_path, "opencitations", "10.1000/demo.1",
                      [{"citing": "a"}, {"citing": "b"}])
        pmids = tmp_path / "pmids.txt"
        pmids.write_text("12345\n99999\n")
        out = tmp_path / "cites.jsonl"
        assert main(["enrich", "--pmids", str(pmids),
                     "--fixtures", str(tmp_path),
                     "--fetched-at", "2025-06-01", "--out", str(out)]) == 0
        recs = [json.loads(l) for l in out.read_text().splitlines()]
        assert recs[0]["citation_count"] == 2
        assert recs[1]["doi"] is None

    def test_featurize_train_evaluate_classify_explain(
        self, manifest_path, tmp_path, capsys
    ):
        vec = tmp_path / "vec.json"
        assert main(["featurize", "--manifest", str(manifest_path),
                     "--vectorizer", "tfidf", "--out", str(vec)]) == 0

        model = tmp_path / "model.json"
        assert main(["train", "--manifest", str(manifest_path),
                     "--vectorizer-file", str(vec), "--model", "svc",
                     "--out", str(model)]) == 0

        report = tmp_path / "report.json"
        assert main(["evaluate", "--manifest", str(manifest_path),
                     "--vectorizer-file", str(vec), "--model-file", str(model),
                     "--out", str(report)]) == 0
        metrics = json.loads(report.read_text())
        assert metrics["weighted_f1"] > 0.5

        sample = tmp_path / "sample.txt"
        sample.write_text("style1m00 style1m01 topicstrokew00 common000")
        capsys.readouterr()
        assert main(["classify", "--vectorizer-file", str(vec),
                     "--model-file", str(model), str(sample)]) == 0
        line = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert line["file"] == str(sample)
        assert set(line["scores"]) == {
            "alternative_scientific", "scientific", "vernacular", "disinformative"
        }
        assert line["argmax"] == "scientific"

        explain_out = tmp_path / "explain.json"
        md_out = tmp_path / "explain.md"
        assert main(["explain", "--vectorizer-file", str(vec),
                     "--model-file", str(model), "--top", "5",
                     "--out", str(explain_out),
                     "--markdown-out", str(md_out)]) == 0
        payload = json.loads(explain_out.read_text())
        assert "scientific" in payload
        assert md_out.exists()

    def test_explain_forest_model(self, manifest_path, tmp_path, capsys):
        vec = tmp_path / "vec.json"
        main(["featurize", "--manifest", str(manifest_path),
              "--max-features", "150", "--out", str(vec)])
        model = tmp_path / "rf.json"
        assert main(["train", "--manifest", str(manifest_path),
                     "--vectorizer-file", str(vec), "--model", "rf",
                     "--out", str(model)]) == 0
        out = tmp_path / "rules.json"
        assert main(["explain", "--vectorizer-file", str(vec),
                     "--model-file", str(model), "--top", "10",
                     "--out", str(out)]) == 0
        rules = json.loads(out.read_text())
        assert rules and {"term", "count", "class_direction"} <= set(rules[0])

    def test_cluster_command(self, tmp_path, capsys):
        E, labels = gaussian_blobs(n_per=25)
        emb = tmp_path / "emb.jsonl"
        write_embeddings(E, emb)
        manifest = tmp_path / "m.jsonl"
        from dataclasses import replace

        from genrelab.corpus import Manifest
        from tests.conftest import make_doc
        docs = tuple(
            replace(make_doc(i, label=labels[doc_id]), id=doc_id)
            for i, doc_id in enumerate(E.ids)
        )
        write_manifest(Manifest(documents=docs), manifest)
        out = tmp_path / "clusters.json"
        assert main(["cluster", "--embeddings", str(emb),
                     "--manifest", str(manifest), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["k"] == 4
        assert payload["purity"] >= 0.99
        assert payload["metrics_optimal_mapping"]["accuracy"] >= 0.99
