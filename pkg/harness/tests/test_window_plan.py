import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genrelab_harness.windows import CANONICAL_BUDGETS, WindowPlan, window_spans


def brute_force_spans(n_tokens, plan):
    """Enumerate stride-aligned starts and clip, independently of the rule."""
    limit = min(n_tokens, plan.max_tokens)
    if limit <= plan.window_size:
        return [(0, limit)]
    spans = []
    start = 0
    while start + plan.stride <= limit:
        spans.append((start, min(start + plan.window_size, limit)))
        start += plan.stride
    return spans


class TestPlanValidation:
    def test_defaults(self):
        plan = WindowPlan()
        assert (plan.window_size, plan.stride, plan.max_tokens) == (512, 256, 512)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"window_size": 0},
            {"stride": 0},
            {"max_tokens": 0},
            {"window_size": 128, "stride": 256},
        ],
    )
    def test_invalid_geometry(self, kwargs):
        with pytest.raises(ValueError):
            WindowPlan(**kwargs)


class TestSpans:
    def test_1024_tokens_four_spans(self):
        plan = WindowPlan(window_size=512, stride=256, max_tokens=2500)
        spans = window_spans(1024, plan)
        assert [s for s, _ in spans] == [0, 256, 512, 768]
        assert spans[-1] == (768, 1024)  # last window truncated to 256 tokens

    def test_short_doc_single_span(self):
        assert window_spans(300, WindowPlan()) == [(0, 300)]

    def test_2500_budget_nine_spans(self):
        plan = WindowPlan(window_size=512, stride=256, max_tokens=2500)
        spans = window_spans(2500, plan)
        assert len(spans) == 9
        assert spans == brute_force_spans(2500, plan)
        assert spans[-1] == (2048, 2500)

    def test_budget_truncates_long_docs(self):
        plan = WindowPlan(window_size=512, stride=256, max_tokens=512)
        assert window_spans(100_000, plan) == [(0, 512)]

    def test_zero_tokens_rejected(self):
        with pytest.raises(ValueError):
            window_spans(0, WindowPlan())

    def test_matches_brute_force_on_random_inputs(self):
        rng = random.Random(0)
        for _ in range(200):
            stride = rng.randint(1, 64)
            plan = WindowPlan(
                window_size=stride * rng.randint(2, 8),
                stride=stride,
                max_tokens=rng.randint(1, 2000),
            )
            n = rng.randint(1, 3000)
            assert window_spans(n, plan) == brute_force_spans(n, plan)


class TestCoverage:
    @staticmethod
    def assert_covers(n, plan):
        spans = window_spans(n, plan)
        limit = min(n, plan.max_tokens)
        covered = set()
        for start, end in spans:
            assert 0 <= start < end <= limit
            assert end - start <= plan.window_size
            covered.update(range(start, end))
        assert covered == set(range(limit))

    def test_coverage_1000_random_lengths(self):
        rng = random.Random(0)
        for _ in range(1000):
            plan = WindowPlan(max_tokens=rng.choice(CANONICAL_BUDGETS))
            self.assert_covers(rng.randint(1, 12_000), plan)

    @given(
        n=st.integers(min_value=1, max_value=50_000),
        budget=st.sampled_from(CANONICAL_BUDGETS),
    )
    @settings(max_examples=200, deadline=None)
    def test_coverage_property(self, n, budget):
        self.assert_covers(n, WindowPlan(max_tokens=budget))

    @given(
        n=st.integers(min_value=1, max_value=5_000),
        stride=st.integers(min_value=1, max_value=100),
        factor=st.integers(min_value=2, max_value=6),
        budget=st.integers(min_value=1, max_value=5_000),
    )
    @settings(max_examples=200, deadline=None)
    def test_coverage_holds_when_window_at_least_twice_stride(
        self, n, stride, factor, budget
    ):
        self.assert_covers(
            n, WindowPlan(window_size=stride * factor, stride=stride, max_tokens=budget)
        )
