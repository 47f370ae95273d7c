"""Sigmoid (Platt) calibration of per-class decision scores.

Per class c, a sigmoid p_c(s) = 1 / (1 + exp(A_c s + B_c)) is fitted on
cross-validated decision scores, one calibrator per fold; at predict time
the fold calibrators' probabilities are averaged.  Scores are independent
per class (one-vs-rest) and are NOT constrained to sum to one: a text may
legitimately resemble several genres at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genrelab.corpus import ClassLabel
from genrelab.errors import DataError

N_CLASSES = 4


def fit_platt(scores: np.ndarray, targets: np.ndarray, max_iter: int = 100):
    """Fit A, B of p(s) = 1/(1+exp(A s + B)) by Newton's method.

    Uses the standard smoothed targets t+ = (N+ + 1)/(N+ + 2) and
    t- = 1/(N- + 2) to avoid overfitting separable score sets.  ``targets``
    is boolean (positive class membership).
    """
    scores = np.asarray(scores, dtype=float)
    targets = np.asarray(targets, dtype=bool)
    n_pos = int(targets.sum())
    n_neg = len(targets) - n_pos
    t = np.where(targets, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    A, B = 0.0, np.log((n_neg + 1.0) / (n_pos + 1.0))
    eps = 1e-12

    def objective(A, B):
        # -[t log p + (1-t) log(1-p)] with p = sigmoid(-z), z = A s + B,
        # written stably as sum(logaddexp(0, z) - (1 - t) z)
        z = A * scores + B
        return float(np.sum(np.logaddexp(0.0, z) - (1.0 - t) * z))

    best = objective(A, B)
    for _ in range(max_iter):
        z = A * scores + B
        p = _sigmoid(z)
        # dL/dz = t - p, d2L/dz2 = p (1 - p)
        grad_A = float(np.sum(scores * (t - p)))
        grad_B = float(np.sum(t - p))
        w = np.maximum(p * (1 - p), eps)
        h_AA = float(np.sum(scores * scores * w))
        h_AB = float(np.sum(scores * w))
        h_BB = float(np.sum(w))
        det = h_AA * h_BB - h_AB * h_AB
        if det <= eps:
            break
        dA = (h_BB * grad_A - h_AB * grad_B) / det
        dB = (h_AA * grad_B - h_AB * grad_A) / det
        # backtracking line search on the Newton direction
        step = 1.0
        improved = False
        for _ in range(20):
            cand = objective(A - step * dA, B - step * dB)
            if cand < best - 1e-12:
                A -= step * dA
                B -= step * dB
                best = cand
                improved = True
                break
            step *= 0.5
        if not improved or abs(dA) + abs(dB) < 1e-10:
            break
    return float(A), float(B)


def _sigmoid(z):
    """Platt's orientation: 1 / (1 + exp(z)), i.e. decreasing in z."""
    return 1.0 / (1.0 + np.exp(np.clip(z, -500, 500)))


@dataclass(frozen=True)
class ClassScores:
    """Independent per-class similarity scores in [0, 1]."""

    scores: dict[ClassLabel, float]
    argmax: ClassLabel
    abstain: bool

    def to_dict(self) -> dict:
        return {
            "scores": {label.slug: self.scores[label] for label in ClassLabel},
            "argmax": self.argmax.slug,
            "abstain": self.abstain,
        }


@dataclass
class CalibratedModel:
    """A base model plus per-fold, per-class sigmoid parameters."""

    base: object
    fold_params: list  # list over folds of (A, B) arrays, each shape (K,)
    folds: int

    def calibrated_scores(self, X: np.ndarray) -> np.ndarray:
        raw = self.base.decision_function(X)
        probs = np.zeros_like(raw)
        for A, B in self.fold_params:
            probs += _sigmoid(raw * A + B)
        return probs / len(self.fold_params)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.calibrated_scores(X), axis=1)

    def to_dict(self) -> dict:
        return {
            "kind": "calibrated",
            "folds": self.folds,
            "fold_params": [
                {"A": A.tolist(), "B": B.tolist()} for A, B in self.fold_params
            ],
            "base": self.base.to_dict(),
        }


def _stratified_folds(y: np.ndarray, folds: int, seed: int):
    """Per-class round-robin fold assignment after a seeded shuffle."""
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=int)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < folds:
            raise DataError(
                f"class {cls} has {len(idx)} samples; "
                f"stratified {folds}-fold calibration needs at least {folds}"
            )
        rng.shuffle(idx)
        assignment[idx] = np.arange(len(idx)) % folds
    return assignment


def calibrate_sigmoid(
    trainer, X, y, folds: int = 5, seed: int = 0
) -> CalibratedModel:
    """Cross-validated Platt calibration around ``trainer``.

    ``trainer`` is a callable (X, y) -> fitted model exposing
    ``decision_function``.  The returned model's base is trained on all
    rows; each fold contributes one per-class (A, B) pair fitted on that
    fold's held-out scores.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if folds < 2:
        raise DataError(f"calibration needs folds >= 2, got {folds}")
    assignment = _stratified_folds(y, folds, seed)
    fold_params = []
    for fold in range(folds):
        held = assignment == fold
        model = trainer(X[~held], y[~held])
        raw = model.decision_function(X[held])
        A = np.zeros(N_CLASSES)
        B = np.zeros(N_CLASSES)
        for cls in range(N_CLASSES):
            A[cls], B[cls] = fit_platt(raw[:, cls], y[held] == cls)
        fold_params.append((A, B))
    base = trainer(X, y)
    return CalibratedModel(base=base, fold_params=fold_params, folds=folds)


def predict_scores(
    model: CalibratedModel, vector: np.ndarray, threshold: float = 0.5
) -> ClassScores:
    """All four calibrated scores plus argmax; abstains below ``threshold``."""
    vector = np.asarray(vector, dtype=float)
    probs = model.calibrated_scores(vector.reshape(1, -1))[0]
    scores = {label: float(probs[int(label)]) for label in ClassLabel}
    arg = ClassLabel(int(np.argmax(probs)))
    return ClassScores(scores=scores, argmax=arg, abstain=bool(probs.max() < threshold))
