"""Acceptance checks for the sliding-window harness.

One criterion per test, each printing a single PASS line on success
(visible with ``pytest -s``).
"""

import random

import numpy as np
import torch

from genrelab_harness.encoder import TokenEncoder, sliding_forward
from genrelab_harness.training import TrainConfig, finetune
from genrelab_harness.windows import CANONICAL_BUDGETS, WindowPlan, window_spans
from tests.conftest import make_records


def report(name, detail):
    print(f"PASS [{name}]: {detail}")


def test_window_arithmetic():
    """Span starts match the worked example; coverage holds everywhere."""
    plan = WindowPlan(window_size=512, stride=256, max_tokens=10_000)
    spans = window_spans(1024, plan)
    assert len(spans) == 4
    assert [s for s, _ in spans] == [0, 256, 512, 768]

    rng = random.Random(0)
    for trial in range(1000):
        budget = rng.choice(CANONICAL_BUDGETS)
        n = rng.randint(1, 12_000)
        limit = min(n, budget)
        covered = set()
        for start, end in window_spans(n, WindowPlan(max_tokens=budget)):
            assert end - start <= 512
            covered.update(range(start, end))
        assert covered == set(range(limit)), f"trial {trial}: n={n} budget={budget}"
    report(
        "window-arithmetic",
        "1024 tokens -> starts {0,256,512,768}; coverage on 1,000 random lengths",
    )


def test_sliding_forward_identity():
    """Short docs equal plain pooling; window mean matches recomputation."""
    torch.manual_seed(0)
    encoder = TokenEncoder(vocab_size=60, dim=24, window_size=512)
    g = torch.Generator().manual_seed(1)
    plan = WindowPlan(max_tokens=10_000)

    worst = 0.0
    for n in (1, 3, 100, 256, 511, 512):
        ids = torch.randint(0, 60, (n,), generator=g)
        with torch.no_grad():
            got = sliding_forward(ids, plan, encoder)
            plain = encoder(ids).mean(dim=0)
        worst = max(worst, float((got - plain).abs().max()))
    assert worst < 1e-5

    ids = torch.randint(0, 60, (1500, ), generator=g)
    long_plan = WindowPlan(max_tokens=2500)
    got = sliding_forward(ids, long_plan, encoder).detach().numpy()
    with torch.no_grad():
        vectors = [
            encoder(ids[s:e]).mean(dim=0).numpy()
            for s, e in window_spans(1500, long_plan)
        ]
    want = np.mean(np.stack(vectors), axis=0)
    external_diff = float(np.abs(got - want).max())
    assert external_diff < 1e-5
    report(
        "sliding-identity",
        f"single-window max diff {worst:.2e}; "
        f"external window-mean recomputation diff {external_diff:.2e}",
    )


def test_planted_signal_budget_trend():
    """A 2,500-token budget beats a 512-token budget when the class
    signal starts after token 512."""
    records = make_records(
        n_docs=120, doc_len=(700, 900), signal_start=512, marker_rate=0.4, seed=0
    )
    scores = {}
    for budget in (512, 2500):
        config = TrainConfig(
            epochs=3,
            learning_rate=1e-2,
            plan=WindowPlan(window_size=512, stride=256, max_tokens=budget),
            seed=0,
        )
        _, history = finetune(records, config)
        scores[budget] = history[-1]["weighted_f1"]
    assert scores[2500] > scores[512], scores
    report(
        "planted-signal",
        f"weighted F1 at budget 2500: {scores[2500]:.4f} > "
        f"budget 512: {scores[512]:.4f}",
    )
