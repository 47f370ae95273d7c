"""Classical classifiers with soft, per-class calibrated scoring.

Default hyperparameters mirror the reference-toolkit defaults the corpus
was benchmarked with: C=1.0, 100 forest trees, 50 boosting stages, 5
calibration folds.
"""

from genrelab.models.linear import (
    LinearModel,
    train_linear_svm,
    train_logreg,
)
from genrelab.models.forest import ForestModel, train_random_forest
from genrelab.models.boost import BoostModel, train_adaboost
from genrelab.models.calibrate import (
    CalibratedModel,
    ClassScores,
    calibrate_sigmoid,
    predict_scores,
)
from genrelab.models.artifacts import save_model, load_model

DEFAULT_C = 1.0
DEFAULT_N_TREES = 100
DEFAULT_N_STAGES = 50
DEFAULT_CALIBRATION_FOLDS = 5
DEFAULT_ABSTAIN_THRESHOLD = 0.5

__all__ = [
    "LinearModel", "ForestModel", "BoostModel", "CalibratedModel", "ClassScores",
    "train_linear_svm", "train_logreg", "train_random_forest", "train_adaboost",
    "calibrate_sigmoid", "predict_scores", "save_model", "load_model",
    "DEFAULT_C", "DEFAULT_N_TREES", "DEFAULT_N_STAGES",
    "DEFAULT_CALIBRATION_FOLDS", "DEFAULT_ABSTAIN_THRESHOLD",
]
