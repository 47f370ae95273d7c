"""Command-line pipeline: ingest -> clean -> balance -> enrich -> featurize
-> train -> evaluate -> classify -> explain -> cluster.

Every stage reads and writes file artifacts (manifest JSONL, vectorizer
JSON, model JSON, report JSON), so stages are independently testable and
resumable.  Exit codes: 0 success, 1 usage error, 2 data error, 3 external
service error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from genrelab import balance as balance_mod
from genrelab import citations as citations_mod
from genrelab import cleaning as cleaning_mod
from genrelab import cluster as cluster_mod
from genrelab import corpus as corpus_mod
from genrelab import evaluation as eval_mod
from genrelab import explain as explain_mod
from genrelab import features as features_mod
from genrelab import models as models_mod
from genrelab.errors import DataError, ExternalServiceError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EXTERNAL = 3

MODEL_CHOICES = ("svc", "logreg", "rf", "adaboost")
VECTORIZER_CHOICES = ("count", "tfidf")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="genrelab")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest raw source files into a manifest")
    p.add_argument("--registry", required=True, help="source registry JSON")
    p.add_argument("--input-root", required=True)
    p.add_argument("--retrieved-at", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("clean", help="apply the cleaning rule set")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("balance", help="balance the manifest per topic and class")
    p.add_argument("--manifest", required=True)
    p.add_argument("--topics", required=True, help="file with one topic per line")
    p.add_argument("--out", required=True)

    p = sub.add_parser("enrich", help="attach citation counts to PMIDs")
    p.add_argument("--pmids", required=True, help="file with one PMID per line")
    p.add_argument("--fixtures", help="fixture dir; omit for live requests")
    p.add_argument("--fetched-at", required=True)
    p.add_argument("--top-decile", action="store_true",
                   help="keep only the top 10%% by citation count (off by default)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("featurize", help="fit a vectorizer on a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--vectorizer", choices=VECTORIZER_CHOICES, default="tfidf")
    p.add_argument("--max-features", type=int, default=features_mod.DEFAULT_MAX_FEATURES)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train and calibrate a classifier")
    p.add_argument("--manifest", required=True)
    p.add_argument("--vectorizer-file", required=True)
    p.add_argument("--model", choices=MODEL_CHOICES, default="svc")
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="evaluate a trained model on a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--vectorizer-file", required=True)
    p.add_argument("--model-file", required=True)
    p.add_argument("--ratio", type=float, default=0.2,
                   help="held-out fraction when no explicit test manifest is given")
    p.add_argument("--test-manifest")
    p.add_argument("--out", required=True)

    p = sub.add_parser("classify", help="score text files; JSON lines to stdout")
    p.add_argument("--vectorizer-file", required=True)
    p.add_argument("--model-file", required=True)
    p.add_argument("--threshold", type=float, default=models_mod.DEFAULT_ABSTAIN_THRESHOLD)
    p.add_argument("files", nargs="+")

    p = sub.add_parser("explain", help="feature/rule importance reports")
    p.add_argument("--vectorizer-file", required=True)
    p.add_argument("--model-file", required=True)
    p.add_argument("--top", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--markdown-out")

    p = sub.add_parser("cluster", help="k-means over an embeddings file")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--n-init", type=int, default=10)
    p.add_argument("--manifest", help="manifest with labels for agreement metrics")
    p.add_argument("--out", required=True)

    return parser


def _load_vectorizer_and_model(args):
    vec = features_mod.load_vectorizer(args.vectorizer_file)
    model, _ = models_mod.load_model(
        args.model_file, expected_vocabulary_hash=features_mod.vocabulary_hash(vec)
    )
    return vec, model


def _trainer_for(name: str, seed: int):
    if name == "svc":
        return lambda X, y: models_mod.train_linear_svm(X, y, C=models_mod.DEFAULT_C)
    if name == "logreg":
        return lambda X, y: models_mod.train_logreg(X, y, C=models_mod.DEFAULT_C)
    if name == "rf":
        return lambda X, y: models_mod.train_random_forest(
            X, y, n_trees=models_mod.DEFAULT_N_TREES, seed=seed
        )
    return lambda X, y: models_mod.train_adaboost(
        X, y, n_stages=models_mod.DEFAULT_N_STAGES, seed=seed
    )


def cmd_ingest(args) -> int:
    specs = corpus_mod.load_source_registry(args.registry)
    docs = []
    for spec in sorted(specs, key=lambda s: s.name):
        if spec.kind == "local-dir":
            src_dir = Path(args.input_root) / spec.name
            if not src_dir.exists():
                continue
            docs += corpus_mod.ingest_source(spec, src_dir, args.retrieved_at)
        else:
            docs += corpus_mod.ingest_source(spec, None, args.retrieved_at)
    manifest = corpus_mod.Manifest(documents=tuple(docs), seed=args.seed)
    corpus_mod.write_manifest(manifest, args.out)
    print(f"ingested {len(docs)} documents -> {args.out}")
    return EXIT_OK


def cmd_clean(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    cleaned = cleaning_mod.clean_manifest(manifest, cleaning_mod.default_ruleset())
    corpus_mod.write_manifest(cleaned, args.out)
    print(f"cleaned {len(cleaned)} documents -> {args.out}")
    return EXIT_OK


def cmd_balance(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    topics = [
        t.strip() for t in Path(args.topics).read_text().splitlines() if t.strip()
    ]
    quotas = balance_mod.compute_quotas(manifest, topics)
    balanced = balance_mod.balance_by_topic(manifest, quotas, seed=args.seed)
    corpus_mod.write_manifest(balanced, args.out)
    for q in quotas:
        print(f"topic {q.topic}: quota {q.per_class_quota}")
    print(f"balanced {len(balanced)} documents -> {args.out}")
    return EXIT_OK


def cmd_enrich(args) -> int:
    pmids = [
        p.strip() for p in Path(args.pmids).read_text().splitlines() if p.strip()
    ]
    entrez = citations_mod.EntrezClient(fixtures_dir=args.fixtures)
    occ = citations_mod.OpenCitationsClient(fixtures_dir=args.fixtures)
    records = citations_mod.enrich_pmids(pmids, entrez, occ, args.fetched_at)
    if args.top_decile:
        records = citations_mod.select_top_decile(
            [r for r in records if r.citation_count is not None]
        )
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({
                "pmid": r.pmid, "doi": r.doi,
                "citation_count": r.citation_count, "fetched_at": r.fetched_at,
            }) + "\n")
    print(f"enriched {len(records)} records -> {args.out}")
    return EXIT_OK


def cmd_featurize(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    texts = [d.text for d in manifest.documents]
    fit = features_mod.fit_tfidf if args.vectorizer == "tfidf" else features_mod.fit_count
    model = fit(texts, max_features=args.max_features)
    features_mod.save_vectorizer(model, args.out)
    print(f"fitted {args.vectorizer} vectorizer (|V|={len(model.vocabulary)}) -> {args.out}")
    return EXIT_OK


def cmd_train(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    vec = features_mod.load_vectorizer(args.vectorizer_file)
    X = vec.transform_matrix([d.text for d in manifest.documents])
    y = np.array([int(d.label) for d in manifest.documents])
    trainer = _trainer_for(args.model, args.seed)
    calibrated = models_mod.calibrate_sigmoid(
        trainer, X, y, folds=models_mod.DEFAULT_CALIBRATION_FOLDS, seed=args.seed
    )
    models_mod.save_model(
        calibrated, args.out,
        vocabulary_hash=features_mod.vocabulary_hash(vec),
        config={"model": args.model, "seed": args.seed},
    )
    print(f"trained calibrated {args.model} -> {args.out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    manifest = corpus_mod.load_manifest(args.manifest)
    vec, model = _load_vectorizer_and_model(args)
    if args.test_manifest:
        test_docs = corpus_mod.load_manifest(args.test_manifest).documents
    else:
        sp = eval_mod.split(manifest, ratio=1.0 - args.ratio, seed=args.seed)
        by_id = manifest.by_id()
        test_docs = [by_id[i] for i in sp.test_ids]
    X = vec.transform_matrix([d.text for d in test_docs])
    y_true = [int(d.label) for d in test_docs]
    y_pred = model.predict(X)
    report = eval_mod.compute_metrics(y_true, y_pred)
    Path(args.out).write_text(json.dumps(report.to_dict(), indent=2), encoding="utf-8")
    print(report.to_markdown())
    return EXIT_OK


def cmd_classify(args) -> int:
    vec, model = _load_vectorizer_and_model(args)
    for name in args.files:
        text = Path(name).read_text(encoding="utf-8")
        scores = models_mod.predict_scores(
            model, vec.transform(text).to_dense(), threshold=args.threshold
        )
        print(json.dumps({"file": name, **scores.to_dict()}))
    return EXIT_OK


def cmd_explain(args) -> int:
    vec, model = _load_vectorizer_and_model(args)
    base = model.base if isinstance(model, models_mod.CalibratedModel) else model
    if isinstance(base, models_mod.ForestModel):
        ranked = explain_mod.extract_forest_rule_terms(base, vec.vocabulary, args.top)
        Path(args.out).write_text(explain_mod.rule_report_json(ranked), encoding="utf-8")
        markdown = explain_mod.rule_report_markdown(ranked)
    elif isinstance(base, models_mod.LinearModel):
        ranking = explain_mod.top_linear_features(base, vec.vocabulary, args.top)
        payload = {
            label.slug: {
                side: [{"term": t, "weight": w} for t, w in pairs]
                for side, pairs in sides.items()
            }
            for label, sides in ranking.items()
        }
        Path(args.out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
        markdown = "\n\n".join(
            f"## {label.slug}\n"
            + "\n".join(f"- {t}: {w:+.4f}" for t, w in sides["positive"][:20])
            for label, sides in ranking.items()
        )
    else:
        raise DataError("explain supports linear and forest models only")
    if args.markdown_out:
        Path(args.markdown_out).write_text(markdown, encoding="utf-8")
    print(f"explanation report -> {args.out}")
    return EXIT_OK


def cmd_cluster(args) -> int:
    E = cluster_mod.load_embeddings(args.embeddings)
    clustering = cluster_mod.kmeans(E, k=args.k, n_init=args.n_init, seed=args.seed)
    payload = {
        "k": args.k,
        "inertia": clustering.inertia,
        "assignment": clustering.assignment,
    }
    if args.manifest:
        manifest = corpus_mod.load_manifest(args.manifest)
        labels = {d.id: d.label for d in manifest.documents}
        payload["metrics_optimal_mapping"] = cluster_mod.cluster_class_metrics(
            clustering, labels, mapping="optimal"
        ).to_dict()
        payload["metrics_identity_mapping"] = cluster_mod.cluster_class_metrics(
            clustering, labels, mapping="identity"
        ).to_dict()
        payload["purity"] = cluster_mod.purity(clustering, labels)
    Path(args.out).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    print(f"clustered {len(E)} embeddings (inertia {clustering.inertia:.2f}) -> {args.out}")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "clean": cmd_clean,
    "balance": cmd_balance,
    "enrich": cmd_enrich,
    "featurize": cmd_featurize,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "classify": cmd_classify,
    "explain": cmd_explain,
    "cluster": cmd_cluster,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ExternalServiceError as exc:
        print(f"external service error: {exc}", file=sys.stderr)
        return EXIT_EXTERNAL
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
