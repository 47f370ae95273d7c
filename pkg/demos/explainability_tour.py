"""Show what the trained models learned, in terms a reviewer can audit.

Two views: signed top features of a calibrated linear model (per class,
positive and negative), and the most-used split terms of a random forest
with their class direction.  On the synthetic corpus the style markers
should dominate both lists and topic words should not.
"""

import numpy as np

from genrelab.explain import (
    extract_forest_rule_terms,
    rule_report_markdown,
    top_linear_features,
)
from genrelab.features import fit_tfidf
from genrelab.models import train_linear_svm, train_random_forest
from genrelab.synth import SynthConfig, generate_four_styles


def main():
    corpus = generate_four_styles(SynthConfig(n_docs=800), seed=0)
    texts = [d.clean_text for d in corpus.documents]
    y = np.array([int(d.label) for d in corpus.documents])
    vec = fit_tfidf(texts, max_features=400)
    X = vec.transform_matrix(texts)

    print("== linear SVM: signed top features per class ==")
    svm = train_linear_svm(X, y)
    for label, sides in top_linear_features(svm, vec.vocabulary, k=5).items():
        pos = ", ".join(f"{t} ({w:+.3f})" for t, w in sides["positive"])
        print(f"{label.slug:<24} {pos}")

    print("\n== random forest: most-used split terms ==")
    forest = train_random_forest(X, y, n_trees=30)
    ranked = extract_forest_rule_terms(forest, vec.vocabulary, k=10)
    print(rule_report_markdown(ranked))

    topic_terms = [e.term for e in ranked if e.term.startswith("topic")]
    print(
        f"\ntopic words among the top 10 split terms: {len(topic_terms)} "
        "(style markers should dominate)"
    )


if __name__ == "__main__":
    main()
