"""Linear classifiers: one-vs-rest squared-hinge SVM and multinomial
logistic regression.

Both minimize a smooth L2-regularized objective with L-BFGS starting from
zero weights, so training is deterministic.  The loss/gradient functions
are module-level so they can be checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from genrelab.errors import DataError

N_CLASSES = 4


@dataclass
class LinearModel:
    """Per-class weight vectors and biases; rows of ``W`` index classes."""

    W: np.ndarray
    b: np.ndarray
    loss: str
    C: float
    objective_history: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.W)) or not np.all(np.isfinite(self.b)):
            raise DataError("non-finite weights in linear model")

    @property
    def n_features(self) -> int:
        return self.W.shape[1]

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_features:
            raise DataError(
                f"dimension mismatch: model has {self.n_features} features, "
                f"input has {X.shape[1]}"
            )
        return X @ self.W.T + self.b

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)

    def to_dict(self) -> dict:
        return {
            "kind": "linear",
            "loss": self.loss,
            "C": self.C,
            "W": self.W.tolist(),
            "b": self.b.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LinearModel":
        return cls(
            W=np.array(data["W"]),
            b=np.array(data["b"]),
            loss=data["loss"],
            C=data["C"],
        )


def _check_training_inputs(X, y, C):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]} labels")
    if len(np.unique(y)) < 2:
        raise DataError("training labels contain a single class")
    if C <= 0:
        raise DataError(f"C must be positive, got {C}")
    return X, y


def squared_hinge_objective(params, X, y_signed, C):
    """Binary objective 0.5 ||w||^2 + C sum max(0, 1 - y s)^2 and gradient.

    ``params`` packs (w, b); the bias is not regularized.
    """
    w, b = params[:-1], params[-1]
    s = X @ w + b
    margin = 1.0 - y_signed * s
    active = margin > 0
    loss = 0.5 * w @ w + C * np.sum(margin[active] ** 2)
    coef = np.zeros_like(s)
    coef[active] = -2.0 * C * y_signed[active] * margin[active]
    grad_w = w + X.T @ coef
    grad_b = coef.sum()
    return loss, np.concatenate([grad_w, [grad_b]])


def logistic_objective(params, X, Y_onehot, C):
    """Multinomial objective 0.5 ||W||^2 + C sum cross-entropy, and gradient."""
    n, d = X.shape
    k = Y_onehot.shape[1]
    W = params[: d * k].reshape(k, d)
    b = params[d * k :]
    logits = X @ W.T + b
    logits -= logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    prob = exp / exp.sum(axis=1, keepdims=True)
    log_prob = logits - np.log(exp.sum(axis=1, keepdims=True))
    loss = 0.5 * np.sum(W * W) - C * np.sum(Y_onehot * log_prob)
    G = C * (prob - Y_onehot)
    grad_W = G.T @ X + W
    grad_b = G.sum(axis=0)
    return loss, np.concatenate([grad_W.ravel(), grad_b])


def train_linear_svm(
    X, y, C: float = 1.0, tol: float = 1e-4, max_iter: int = 1000, seed: int = 0
) -> LinearModel:
    """One-vs-rest L2-regularized squared-hinge classifier.

    ``seed`` is accepted for interface uniformity; the optimization itself
    is deterministic (zero initialization, L-BFGS).
    """
    X, y = _check_training_inputs(X, y, C)
    n, d = X.shape
    W = np.zeros((N_CLASSES, d))
    b = np.zeros(N_CLASSES)
    history = []
    for cls in range(N_CLASSES):
        y_signed = np.where(y == cls, 1.0, -1.0)
        trace = []
        res = minimize(
            squared_hinge_objective,
            np.zeros(d + 1),
            args=(X, y_signed, C),
            jac=True,
            method="L-BFGS-B",
            callback=lambda p: trace.append(
                squared_hinge_objective(p, X, y_signed, C)[0]
            ),
            options={"maxiter": max_iter, "ftol": tol * 1e-3, "gtol": 1e-7},
        )
        W[cls] = res.x[:-1]
        b[cls] = res.x[-1]
        history.append(trace)
    return LinearModel(W=W, b=b, loss="squared_hinge", C=C, objective_history=history)


def train_logreg(
    X, y, C: float = 1.0, grad_tol: float = 1e-5, max_iter: int = 2000, seed: int = 0
) -> LinearModel:
    """Multinomial logistic regression minimized until the gradient
    infinity-norm drops below ``grad_tol``."""
    X, y = _check_training_inputs(X, y, C)
    n, d = X.shape
    Y = np.zeros((n, N_CLASSES))
    Y[np.arange(n), y] = 1.0
    trace = []
    res = minimize(
        logistic_objective,
        np.zeros(d * N_CLASSES + N_CLASSES),
        args=(X, Y, C),
        jac=True,
        method="L-BFGS-B",
        callback=lambda p: trace.append(logistic_objective(p, X, Y, C)[0]),
        options={"maxiter": max_iter, "gtol": grad_tol, "ftol": 1e-14},
    )
    W = res.x[: d * N_CLASSES].reshape(N_CLASSES, d)
    b = res.x[d * N_CLASSES :]
    return LinearModel(W=W, b=b, loss="logistic", C=C, objective_history=[trace])
