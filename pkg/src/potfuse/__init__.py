"""Probability-driven potential functions for fusing linear classifiers.

Typical use::

    from potfuse import make_banana, cross_validate, Pipeline
    report = cross_validate(make_banana(), Pipeline(trainer="nc", strategy="kc"))
    print(report.pooled_criteria)
"""
from .density import GaussianMle, Kde1D, NaiveKde, fit_gaussian_mle, silverman_bandwidth
from .ensemble import BaggingConfig, BinaryEnsemble, OvoEnsemble, fuse, make_bags, predict_ovo, train_ovo
from .errors import FitError, InputError, TrainingError
from .evaluation import (
    CRITERIA,
    CriterionScores,
    EvaluationReport,
    Pipeline,
    average_ranks,
    compute_criteria,
    confusion_matrix,
    cross_validate,
    cross_validate_many,
    iman_davenport,
    rank_table,
)
from .geometry import Hyperplane, classify, discriminant, plane_basis, project_onto_basis
from .io_data import Dataset, load_arff, load_csv, load_dataset, make_banana, make_blobs, sample_path
from .linear_models import (
    LinearModel,
    TrainSet,
    train_flda,
    train_linear_svm,
    train_logistic,
    train_nearest_centroid,
)
from .preprocessing import apply_pca, apply_standardizer, fit_pca, fit_standardizer
from .scoring import STRATEGIES, ClassPriors, ScoredMember, fit_member, score

__version__ = "0.1.0"
