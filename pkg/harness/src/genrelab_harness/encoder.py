"""Token encoder, sliding-window forward pass, and the 4-label doc head.

The encoder maps a window of token ids to per-token hidden vectors; the
sliding forward mean-pools each window over its tokens and then averages
the window vectors, so gradients flow through every window equally.
"""

from __future__ import annotations

import torch
from torch import nn

from genrelab_harness.windows import WindowPlan, window_spans

N_LABELS = 4


class TokenEncoder(nn.Module):
    """Small trainable encoder: embeddings plus a residual feed-forward block.

    Accepts at most ``window_size`` tokens per call.
    """

    def __init__(self, vocab_size: int, dim: int = 32, window_size: int = 512):
        super().__init__()
        self.window_size = window_size
        self.dim = dim
        self.embedding = nn.Embedding(vocab_size, dim)
        self.ff = nn.Sequential(
            nn.Linear(dim, dim * 2),
            nn.GELU(),
            nn.Linear(dim * 2, dim),
        )

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        if token_ids.dim() != 1:
            raise ValueError(f"expected a 1-d id tensor, got shape {tuple(token_ids.shape)}")
        if token_ids.numel() == 0:
            raise ValueError("encoder received an empty window")
        if token_ids.numel() > self.window_size:
            raise ValueError(
                f"{token_ids.numel()} tokens exceed window_size {self.window_size}"
            )
        h = self.embedding(token_ids)
        return h + self.ff(h)


def sliding_forward(
    token_ids: torch.Tensor, plan: WindowPlan, encoder: nn.Module
) -> torch.Tensor:
    """Pooled document vector: mean over windows of per-window mean pooling."""
    if token_ids.dim() != 1:
        raise ValueError(f"expected a 1-d id tensor, got shape {tuple(token_ids.shape)}")
    if token_ids.numel() == 0:
        raise ValueError("cannot encode a zero-token document")
    window_vectors = [
        encoder(token_ids[start:end]).mean(dim=0)
        for start, end in window_spans(token_ids.numel(), plan)
    ]
    return torch.stack(window_vectors).mean(dim=0)


class DocClassifier(nn.Module):
    """Sliding-window encoder with an independent sigmoid head per label."""

    def __init__(self, vocab_size: int, dim: int = 32, window_size: int = 512):
        super().__init__()
        self.encoder = TokenEncoder(vocab_size, dim=dim, window_size=window_size)
        self.head = nn.Linear(dim, N_LABELS)

    def embed(self, token_ids: torch.Tensor, plan: WindowPlan) -> torch.Tensor:
        """Penultimate representation: the pooled document vector."""
        return sliding_forward(token_ids, plan, self.encoder)

    def forward(self, token_ids: torch.Tensor, plan: WindowPlan) -> torch.Tensor:
        return self.head(self.embed(token_ids, plan))
