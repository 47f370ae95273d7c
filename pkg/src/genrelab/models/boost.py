"""Multiclass AdaBoost (SAMME) over depth-1 decision stumps.

Each stage fits the stump minimizing weighted misclassification over every
feature (exhaustive threshold scan), then reweights samples by the stage
weight alpha = ln((1 - err) / err) + ln(K - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genrelab.errors import DataError

N_CLASSES = 4
_CHUNK = 128  # features per vectorized scan block


@dataclass
class Stump:
    feature: int
    threshold: float
    left_class: int   # predicted when x[feature] <= threshold
    right_class: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.where(
            X[:, self.feature] <= self.threshold, self.left_class, self.right_class
        )

    def to_dict(self):
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left_class": self.left_class,
            "right_class": self.right_class,
        }


def _fit_stump(X, orders, W_onehot):
    """Best stump under current sample weights.

    ``orders`` is the per-feature argsort of X (precomputed once per fit);
    ``W_onehot`` is (n, K) with the sample weight in the true-class column.
    A split's quality is the total weight it classifies correctly when each
    side predicts its weighted-majority class.
    """
    n, d = X.shape
    totals = W_onehot.sum(axis=0)
    best_score = -np.inf
    best = None
    for start in range(0, d, _CHUNK):
        feats = np.arange(start, min(start + _CHUNK, d))
        ord_block = orders[:, feats]                     # (n, m)
        v_sorted = np.take_along_axis(X[:, feats], ord_block, axis=0)
        # cumulative weighted class counts along each feature's sort order
        cum = np.cumsum(W_onehot[ord_block.T], axis=1)    # (m, n, K)
        left_best = cum[:, :-1, :].max(axis=2)            # (m, n-1)
        right_best = (totals - cum[:, :-1, :]).max(axis=2)
        score = left_best + right_best
        valid = v_sorted[:-1, :] < v_sorted[1:, :]        # (n-1, m)
        score[~valid.T] = -np.inf
        flat = int(np.argmax(score))
        m_i, s_i = divmod(flat, n - 1)
        if score[m_i, s_i] > best_score:
            best_score = score[m_i, s_i]
            f = int(feats[m_i])
            thr = float((v_sorted[s_i, m_i] + v_sorted[s_i + 1, m_i]) / 2.0)
            left = int(cum[m_i, s_i].argmax())
            right = int((totals - cum[m_i, s_i]).argmax())
            best = Stump(feature=f, threshold=thr, left_class=left, right_class=right)
    if best is None:
        # no feature separates any pair of samples; predict the majority class
        cls = int(totals.argmax())
        best = Stump(feature=0, threshold=np.inf, left_class=cls, right_class=cls)
    return best


@dataclass
class BoostModel:
    stages: list  # (Stump, alpha) in application order
    n_features: int
    seed: int

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Per-class share of total stage weight voting for that class."""
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise DataError(
                f"dimension mismatch: model has {self.n_features} features, "
                f"input has {X.shape[1]}"
            )
        votes = np.zeros((X.shape[0], N_CLASSES))
        total_alpha = 0.0
        for stump, alpha in self.stages:
            pred = stump.predict(X)
            votes[np.arange(X.shape[0]), pred] += alpha
            total_alpha += alpha
        return votes / total_alpha if total_alpha > 0 else votes

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)

    def to_dict(self) -> dict:
        return {
            "kind": "boost",
            "n_features": self.n_features,
            "seed": self.seed,
            "stages": [
                {"stump": s.to_dict(), "alpha": a} for s, a in self.stages
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoostModel":
        return cls(
            stages=[
                (Stump(**st["stump"]), st["alpha"]) for st in data["stages"]
            ],
            n_features=data["n_features"],
            seed=data["seed"],
        )


def train_adaboost(X, y, n_stages: int = 50, seed: int = 0) -> BoostModel:
    """Stagewise SAMME boosting; stops early on a perfect or useless stump."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]} labels")
    if len(np.unique(y)) < 2:
        raise DataError("training labels contain a single class")
    n, d = X.shape
    orders = np.argsort(X, axis=0, kind="stable")
    w = np.full(n, 1.0 / n)
    stages = []
    for _ in range(n_stages):
        W_onehot = np.zeros((n, N_CLASSES))
        W_onehot[np.arange(n), y] = w
        stump = _fit_stump(X, orders, W_onehot)
        pred = stump.predict(X)
        miss = pred != y
        err = float(w[miss].sum())
        if err <= 0.0:
            stages.append((stump, np.log(1e12) + np.log(N_CLASSES - 1)))
            break
        if err >= 1.0 - 1.0 / N_CLASSES:
            if not stages:
                raise DataError("adaboost: first stump is no better than chance")
            break
        alpha = float(np.log((1.0 - err) / err) + np.log(N_CLASSES - 1))
        stages.append((stump, alpha))
        w = w * np.exp(alpha * miss)
        w = w / w.sum()
    return BoostModel(stages=stages, n_features=d, seed=seed)
