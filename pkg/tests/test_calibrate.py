import numpy as np
import pytest
from scipy.optimize import minimize as scipy_minimize

from genrelab.corpus import ClassLabel
from genrelab.errors import DataError
from genrelab.models import train_linear_svm
from genrelab.models.calibrate import (
    CalibratedModel,
    _sigmoid,
    _stratified_folds,
    calibrate_sigmoid,
    fit_platt,
    predict_scores,
)
from tests.test_linear import four_class_blobs


def oracle_platt(scores, targets):
    """Independent fit of the same smoothed-target objective via Nelder-Mead."""
    n_pos = int(targets.sum())
    n_neg = len(targets) - n_pos
    t = np.where(targets, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    def nll(params):
        z = params[0] * scores + params[1]
        return np.sum(np.logaddexp(0.0, z) - (1.0 - t) * z)

    res = scipy_minimize(nll, [0.0, 0.0], method="Nelder-Mead",
                         options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 5000})
    return res.x, res.fun


class TestFitPlatt:
    def test_matches_independent_optimizer(self):
        rng = np.random.default_rng(0)
        for trial in range(10):
            scores = rng.normal(size=40) + rng.normal() * 0.5
            targets = scores + rng.normal(size=40) * 0.8 > 0
            if targets.all() or not targets.any():
                continue
            A, B = fit_platt(scores, targets)
            (A_o, B_o), f_o = oracle_platt(scores, targets)
            n_pos = int(targets.sum())
            n_neg = len(targets) - n_pos
            t = np.where(targets, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))
            z = A * scores + B
            f_got = np.sum(np.logaddexp(0.0, z) - (1.0 - t) * z)
            assert f_got <= f_o + 1e-6, f"trial {trial}"
            assert A == pytest.approx(A_o, abs=1e-3)

    def test_negative_slope_for_well_ordered_scores(self):
        scores = np.linspace(-3, 3, 30)
        targets = scores > 0
        A, _ = fit_platt(scores, targets)
        assert A < 0  # p = 1/(1+exp(A s + B)) increases with s only if A < 0

    def test_probability_monotone_in_score(self):
        rng = np.random.default_rng(1)
        scores = rng.normal(size=50)
        targets = scores + 0.3 * rng.normal(size=50) > 0
        A, B = fit_platt(scores, targets)
        grid = np.linspace(-5, 5, 101)
        p = _sigmoid(A * grid + B)
        assert (np.diff(p) >= 0).all()

    def test_separable_scores_stay_finite(self):
        scores = np.array([-2.0, -1.0, 1.0, 2.0])
        targets = np.array([False, False, True, True])
        A, B = fit_platt(scores, targets)
        assert np.isfinite(A) and np.isfinite(B)
        # smoothed targets keep probabilities off the 0/1 rails
        p = _sigmoid(A * scores + B)
        assert (p > 0.01).all() and (p < 0.99).all()


class TestStratifiedFolds:
    def test_every_class_in_every_fold(self):
        y = np.repeat(np.arange(4), 10)
        assignment = _stratified_folds(y, folds=5, seed=0)
        for fold in range(5):
            held = y[assignment == fold]
            assert set(held.tolist()) == {0, 1, 2, 3}

    def test_class_too_small(self):
        y = np.array([0, 0, 0, 1, 2, 3])
        with pytest.raises(DataError):
            _stratified_folds(y, folds=2, seed=0)


@pytest.fixture(scope="module")
def fitted():
    X, y = four_class_blobs(n_per_class=200, seed=0, spread=0.4)
    model = calibrate_sigmoid(train_linear_svm, X, y, folds=5, seed=0)
    return X, y, model


class TestCalibratedModel:

    def test_scores_in_unit_interval(self, fitted):
        X, _, model = fitted
        probs = model.calibrated_scores(X)
        assert (probs > 0).all() and (probs < 1).all()

    def test_scores_do_not_sum_to_one(self, fitted):
        X, _, model = fitted
        sums = model.calibrated_scores(X).sum(axis=1)
        assert not np.allclose(sums, 1.0)

    def test_monotone_in_raw_score_per_class(self, fitted):
        X, _, model = fitted
        d = X.shape[1]
        raw_grid = np.linspace(-4, 4, 201)
        for cls in range(4):
            probs = np.zeros_like(raw_grid)
            for A, B in model.fold_params:
                probs += _sigmoid(raw_grid * A[cls] + B[cls])
            assert (np.diff(probs) >= -1e-12).all() or (np.diff(probs) <= 1e-12).all()

    def test_high_confidence_on_separated_data(self, fitted):
        # fresh draws from the same blobs act as held-out points
        X, y, model = fitted
        X_new, y_new = four_class_blobs(n_per_class=30, seed=0, spread=0.4)
        probs = model.calibrated_scores(X_new)
        true_class_probs = probs[np.arange(len(y_new)), y_new]
        assert np.median(true_class_probs) >= 0.95

    def test_argmax_preserved_when_slopes_equal(self):
        X, y = four_class_blobs(n_per_class=8, seed=1)
        base = train_linear_svm(X, y)
        shared = (np.full(4, -2.0), np.zeros(4))
        model = CalibratedModel(base=base, fold_params=[shared], folds=1)
        assert np.array_equal(model.predict(X), base.predict(X))

    def test_folds_validated(self):
        X, y = four_class_blobs(n_per_class=8)
        with pytest.raises(DataError):
            calibrate_sigmoid(train_linear_svm, X, y, folds=1)


class TestPredictScores:
    def test_reports_all_classes_and_argmax(self):
        X, y = four_class_blobs(n_per_class=10, seed=2)
        model = calibrate_sigmoid(train_linear_svm, X, y, folds=3, seed=0)
        out = predict_scores(model, X[0], threshold=0.5)
        assert set(out.scores) == set(ClassLabel)
        assert out.argmax == ClassLabel(0)
        assert out.abstain is False

    def test_abstains_below_threshold(self):
        X, y = four_class_blobs(n_per_class=10, seed=3)
        model = calibrate_sigmoid(train_linear_svm, X, y, folds=3, seed=0)
        out = predict_scores(model, X[0], threshold=1.0)
        assert out.abstain is True

    def test_to_dict_uses_slugs(self):
        X, y = four_class_blobs(n_per_class=10, seed=4)
        model = calibrate_sigmoid(train_linear_svm, X, y, folds=3, seed=0)
        d = predict_scores(model, X[0]).to_dict()
        assert set(d["scores"]) == {l.slug for l in ClassLabel}
        assert isinstance(d["abstain"], bool)
