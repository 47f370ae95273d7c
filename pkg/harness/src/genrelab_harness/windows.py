"""Sliding-window span planning over token sequences.

A document longer than one encoder window is read as overlapping spans at
stride intervals, truncated to a token budget.  Span planning is pure
arithmetic and fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

CANONICAL_BUDGETS = (512, 2500, 5000, 7500, 10000)


@dataclass(frozen=True)
class WindowPlan:
    """Window geometry plus the token budget read from each document.

    Tokens beyond ``max_tokens`` are truncated, not sampled.  Full
    coverage of the budgeted prefix is guaranteed whenever the text fits
    in one window or ``window_size >= 2 * stride`` (the default geometry).
    """

    window_size: int = 512
    stride: int = 256
    max_tokens: int = 512

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.stride > self.window_size:
            raise ValueError(
                f"stride {self.stride} exceeds window_size {self.window_size}"
            )
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")


def window_spans(n_tokens: int, plan: WindowPlan) -> list[tuple[int, int]]:
    """Half-open (start, end) spans covering the budgeted token prefix.

    A text that fits in one window yields a single untruncated span.
    Longer texts yield ``floor(limit / stride)`` spans at starts 0,
    stride, 2*stride, ...; the final span is truncated at the budget
    limit rather than padded.
    """
    if n_tokens < 1:
        raise ValueError(f"n_tokens must be >= 1, got {n_tokens}")
    limit = min(n_tokens, plan.max_tokens)
    if limit <= plan.window_size:
        return [(0, limit)]
    return [
        (start, min(start + plan.window_size, limit))
        for start in range(0, (limit // plan.stride) * plan.stride, plan.stride)
    ]
