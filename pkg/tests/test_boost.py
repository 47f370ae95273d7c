import numpy as np
import pytest

from genrelab.errors import DataError
from genrelab.models.boost import BoostModel, Stump, _fit_stump, train_adaboost
from tests.test_linear import four_class_blobs


def oracle_best_stump_score(X, w, y):
    """Exhaustive weighted-accuracy search over every (feature, threshold)."""
    n, d = X.shape
    best = -np.inf
    for f in range(d):
        values = np.unique(X[:, f])
        for lo, hi in zip(values[:-1], values[1:]):
            thr = (lo + hi) / 2.0
            left = X[:, f] <= thr
            score = 0.0
            for side in (left, ~left):
                side_best = max(
                    w[side & (y == c)].sum() for c in range(4)
                )
                score += side_best
            best = max(best, score)
    return best


class TestStumpFit:
    def test_matches_exhaustive_search(self):
        rng = np.random.default_rng(0)
        for trial in range(15):
            n, d = 12, 3
            X = rng.normal(size=(n, d)).round(1)
            y = rng.integers(0, 4, size=n)
            w = rng.random(n)
            w /= w.sum()
            W_onehot = np.zeros((n, 4))
            W_onehot[np.arange(n), y] = w
            orders = np.argsort(X, axis=0, kind="stable")
            stump = _fit_stump(X, orders, W_onehot)
            left = X[:, stump.feature] <= stump.threshold
            got = (
                w[left & (y == stump.left_class)].sum()
                + w[~left & (y == stump.right_class)].sum()
            )
            want = oracle_best_stump_score(X, w, y)
            assert got == pytest.approx(want, abs=1e-12), f"trial {trial}"

    def test_constant_features_fall_back_to_majority(self):
        X = np.ones((6, 2))
        y = np.array([0, 0, 0, 1, 2, 3])
        W_onehot = np.zeros((6, 4))
        W_onehot[np.arange(6), y] = 1 / 6
        stump = _fit_stump(X, np.argsort(X, axis=0, kind="stable"), W_onehot)
        assert stump.left_class == stump.right_class == 0


class TestTraining:
    def test_stagewise_updates_replay_correctly(self):
        """Replay the boosting loop independently over the fitted stumps.

        At each stage the chosen stump must be optimal under the replayed
        weights (up to ties) and the stage weight must equal the textbook
        alpha for the replayed error.
        """
        rng = np.random.default_rng(0)
        for trial in range(5):
            X = rng.normal(size=(20, 3)).round(1)
            y = rng.integers(0, 4, size=20)
            if len(np.unique(y)) < 2:
                continue
            model = train_adaboost(X, y, n_stages=6)
            w = np.full(len(y), 1.0 / len(y))
            for stump, alpha in model.stages:
                score = (
                    w[(X[:, stump.feature] <= stump.threshold)
                      & (y == stump.left_class)].sum()
                    + w[(X[:, stump.feature] > stump.threshold)
                        & (y == stump.right_class)].sum()
                )
                assert score == pytest.approx(
                    oracle_best_stump_score(X, w, y), abs=1e-12
                ), f"trial {trial}"
                miss = stump.predict(X) != y
                err = w[miss].sum()
                assert 0 < err < 0.75
                assert alpha == pytest.approx(
                    np.log((1 - err) / err) + np.log(3), abs=1e-12
                )
                w = w * np.exp(alpha * miss)
                w /= w.sum()

    def test_learns_axis_aligned_text_like_data(self):
        # sparse nonnegative counts, distinct per-class vocabulary blocks,
        # unbalanced enough that the stump pool stays diverse
        rng = np.random.default_rng(1)
        y = np.repeat(np.arange(4), [30, 25, 20, 15])
        X = np.zeros((len(y), 12))
        for i, c in enumerate(y):
            for j in range(3):
                X[i, 3 * c + j] = rng.poisson(3.0)
            X[i] += rng.poisson(0.3, size=12)
        model = train_adaboost(X, y, n_stages=50)
        assert (model.predict(X) == y).mean() >= 0.7

    def test_stage_weights_finite_and_ordered(self):
        X, y = four_class_blobs(seed=1, spread=1.5)
        model = train_adaboost(X, y, n_stages=10)
        assert model.n_stages >= 1
        for _, alpha in model.stages:
            assert np.isfinite(alpha)

    def test_single_class_rejected(self):
        with pytest.raises(DataError):
            train_adaboost(np.ones((4, 2)), np.zeros(4, dtype=int))

    def test_deterministic(self):
        X, y = four_class_blobs(n_per_class=8, seed=2)
        a = train_adaboost(X, y, n_stages=8)
        b = train_adaboost(X, y, n_stages=8)
        assert a.to_dict() == b.to_dict()

    def test_early_stop_on_perfect_stump(self):
        # one feature separates class 0 from class 1 perfectly on a binary
        # subproblem; SAMME should keep alpha finite and stop cleanly
        X = np.array([[0.0], [0.1], [0.9], [1.0]])
        y = np.array([0, 0, 1, 1])
        model = train_adaboost(X, y, n_stages=10)
        assert (model.predict(X) == y).all()


class TestDecision:
    def test_vote_shares_sum_to_one(self):
        X, y = four_class_blobs(seed=3)
        model = train_adaboost(X, y, n_stages=10)
        scores = model.decision_function(X[:5])
        assert np.allclose(scores.sum(axis=1), 1.0)
        assert (scores >= 0).all()

    def test_round_trip(self):
        X, y = four_class_blobs(n_per_class=6, seed=4)
        model = train_adaboost(X, y, n_stages=6)
        restored = BoostModel.from_dict(model.to_dict())
        assert np.allclose(
            restored.decision_function(X), model.decision_function(X)
        )

    def test_stump_predict(self):
        stump = Stump(feature=1, threshold=0.5, left_class=2, right_class=3)
        X = np.array([[0, 0.2], [0, 0.9]])
        assert stump.predict(X).tolist() == [2, 3]
