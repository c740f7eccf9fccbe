"""The six-classifier suite behind one train/predict/save/load surface."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import InvalidTrainingSetError, ModelFormatError, UnsupportedVersionError
from ..features import FeatureLayout, FeatureScaler, FeatureVector, to_matrix
from ..keypoints import ActivityClass
from .base import BaseEstimator, ClassifierMixin, check_array
from .kernel import KernelSVC, rbf_kernel
from .naive_bayes import GaussianNB
from .neighbors import KNeighborsClassifier
from .sgd import SGDClassifier
from .tree import DecisionTreeClassifier

MODEL_FORMAT_VERSION = 1


class ClassifierKind(Enum):
    LOGISTIC_REGRESSION = "logistic_regression"
    GAUSSIAN_NB = "gaussian_nb"
    DECISION_TREE = "decision_tree"
    SVM_RBF = "svm_rbf"
    KNN = "knn"
    SVM_SGD = "svm_sgd"


# Kinds whose features are standardized unless a run says otherwise.
SCALED_BY_DEFAULT = frozenset(
    {ClassifierKind.LOGISTIC_REGRESSION, ClassifierKind.SVM_RBF, ClassifierKind.SVM_SGD}
)


@dataclass(frozen=True)
class HyperParams:
    epochs: int = 200
    learning_rate: float = 1e-3
    l2_lambda: float = 1e-4
    knn_k: int = 5
    knn_metric: str = "euclidean"
    rbf_gamma: float | str = "scale"
    tree_criterion: str = "gini"
    tree_max_depth: int | None = None
    multiclass: str = "one_vs_rest"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be non-negative")
        if self.knn_k < 1:
            raise ValueError("knn_k must be positive")
        if self.knn_metric != "euclidean":
            raise ValueError("knn_metric must be 'euclidean'")
        if self.rbf_gamma != "scale" and (
            not isinstance(self.rbf_gamma, (int, float)) or self.rbf_gamma <= 0
        ):
            raise ValueError("rbf_gamma must be 'scale' or a positive number")
        if self.tree_criterion != "gini":
            raise ValueError("tree_criterion must be 'gini'")
        if self.tree_max_depth is not None and self.tree_max_depth < 1:
            raise ValueError("tree_max_depth must be positive when set")
        if self.multiclass != "one_vs_rest":
            raise ValueError("multiclass must be 'one_vs_rest'")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "l2_lambda": self.l2_lambda,
            "knn_k": self.knn_k,
            "knn_metric": self.knn_metric,
            "rbf_gamma": self.rbf_gamma,
            "tree_criterion": self.tree_criterion,
            "tree_max_depth": self.tree_max_depth,
            "multiclass": self.multiclass,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "HyperParams":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown hyperparameters: {sorted(unknown)}")
        return cls(**payload)


def make_estimator(kind: ClassifierKind, hp: HyperParams, seed: int):
    if kind is ClassifierKind.SVM_SGD:
        return SGDClassifier(
            loss="hinge",
            epochs=hp.epochs,
            learning_rate=hp.learning_rate,
            l2_lambda=hp.l2_lambda,
            random_state=seed,
        )
    if kind is ClassifierKind.LOGISTIC_REGRESSION:
        return SGDClassifier(
            loss="log_loss",
            epochs=hp.epochs,
            learning_rate=hp.learning_rate,
            l2_lambda=hp.l2_lambda,
            random_state=seed,
        )
    if kind is ClassifierKind.GAUSSIAN_NB:
        return GaussianNB()
    if kind is ClassifierKind.DECISION_TREE:
        return DecisionTreeClassifier(
            criterion=hp.tree_criterion, max_depth=hp.tree_max_depth
        )
    if kind is ClassifierKind.KNN:
        return KNeighborsClassifier(n_neighbors=hp.knn_k, metric=hp.knn_metric)
    if kind is ClassifierKind.SVM_RBF:
        return KernelSVC(
            gamma=hp.rbf_gamma,
            epochs=hp.epochs,
            l2_lambda=hp.l2_lambda if hp.l2_lambda > 0 else 1e-4,
            random_state=seed,
        )
    raise ValueError(f"unknown classifier kind {kind!r}")


@dataclass
class TrainedModel:
    kind: ClassifierKind
    estimator: BaseEstimator
    layout: FeatureLayout
    scaler: FeatureScaler | None
    seed: int
    hyperparams: HyperParams

    def _prepare(self, X: np.ndarray) -> np.ndarray:
        if X.shape[-1] != self.layout.dimension:
            raise ValueError(
                f"dimension mismatch: got {X.shape[-1]}, "
                f"expected {self.layout.dimension}"
            )
        if self.scaler is not None:
            X = self.scaler.transform(X)
        return X

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        X = check_array(X)
        return self.estimator.predict(self._prepare(X))

    def predict(self, v: FeatureVector) -> ActivityClass:
        pred = self.predict_matrix(v.values[np.newaxis, :])
        return ActivityClass(int(pred[0]))

    def predict_many(self, vectors: Sequence[FeatureVector]) -> list[ActivityClass]:
        X, _ = to_matrix(vectors)
        return [ActivityClass(int(p)) for p in self.predict_matrix(X)]


def train(
    kind: ClassifierKind,
    data: Sequence[FeatureVector],
    hp: HyperParams | None = None,
    seed: int = 0,
    standardize: bool | None = None,
) -> TrainedModel:
    """Fit one classifier on labeled feature vectors.

    standardize=None applies the per-kind default (on for the linear and
    kernel margins, off for tree/NB/kNN).
    """
    hp = hp or HyperParams()
    if not data:
        raise InvalidTrainingSetError("training set is empty")
    if any(v.label is None for v in data):
        raise InvalidTrainingSetError("training vectors must all be labeled")
    X, y = to_matrix(data)
    present = {ActivityClass(int(c)) for c in np.unique(y)}
    missing = set(ActivityClass) - present
    if missing:
        names = ", ".join(sorted(c.key for c in missing))
        raise InvalidTrainingSetError(f"no training samples for: {names}")

    scaler = None
    if standardize is None:
        standardize = kind in SCALED_BY_DEFAULT
    if standardize:
        scaler = FeatureScaler().fit(X)
        X = scaler.transform(X)

    estimator = make_estimator(kind, hp, seed)
    estimator.fit(X, y)
    return TrainedModel(kind, estimator, data[0].layout, scaler, seed, hp)


def predict(model: TrainedModel, v: FeatureVector) -> ActivityClass:
    return model.predict(v)


def _estimator_payload(kind: ClassifierKind, est) -> dict:
    if isinstance(est, SGDClassifier):
        return {
            "loss": est.loss,
            "classes": est.classes_.tolist(),
            "weights": est.coef_.tolist(),
            "bias": est.intercept_.tolist(),
        }
    if isinstance(est, GaussianNB):
        return {
            "classes": est.classes_.tolist(),
            "theta": est.theta_.tolist(),
            "var": est.var_.tolist(),
            "priors": est.class_prior_.tolist(),
        }
    if isinstance(est, DecisionTreeClassifier):
        return {
            "classes": est.classes_.tolist(),
            "n_features": est.n_features_,
            "nodes": [
                [n.feature, n.threshold, n.left, n.right, n.value] for n in est.nodes_
            ],
        }
    if isinstance(est, KNeighborsClassifier):
        return {
            "classes": est.classes_.tolist(),
            "X": est.X_.tolist(),
            "y": est.y_.tolist(),
        }
    if isinstance(est, KernelSVC):
        return {
            "classes": est.classes_.tolist(),
            "gamma": est.gamma_,
            "support_vectors": est.support_vectors_.tolist(),
            "dual_coef": est.dual_coef_.tolist(),
        }
    raise ValueError(f"cannot serialize estimator {type(est).__name__}")


def _estimator_from_payload(kind: ClassifierKind, payload: dict, hp: HyperParams, seed: int):
    est = make_estimator(kind, hp, seed)
    classes = np.asarray(payload["classes"], dtype=np.int64)
    est.classes_ = classes
    if isinstance(est, SGDClassifier):
        est.coef_ = np.asarray(payload["weights"], dtype=np.float64)
        est.intercept_ = np.asarray(payload["bias"], dtype=np.float64)
    elif isinstance(est, GaussianNB):
        est.theta_ = np.asarray(payload["theta"], dtype=np.float64)
        est.var_ = np.asarray(payload["var"], dtype=np.float64)
        est.class_prior_ = np.asarray(payload["priors"], dtype=np.float64)
    elif isinstance(est, DecisionTreeClassifier):
        from .tree import _Node

        est.n_features_ = int(payload["n_features"])
        est.nodes_ = [
            _Node(int(f), float(t), int(l), int(r), int(v))
            for f, t, l, r, v in payload["nodes"]
        ]
    elif isinstance(est, KNeighborsClassifier):
        est.X_ = np.asarray(payload["X"], dtype=np.float64)
        est.y_ = np.asarray(payload["y"], dtype=np.int64)
    elif isinstance(est, KernelSVC):
        est.gamma_ = float(payload["gamma"])
        est.support_vectors_ = np.asarray(payload["support_vectors"], dtype=np.float64)
        est.dual_coef_ = np.asarray(payload["dual_coef"], dtype=np.float64)
    return est


def save_model(model: TrainedModel) -> bytes:
    """Versioned, self-describing JSON payload."""
    doc = {
        "version": MODEL_FORMAT_VERSION,
        "kind": model.kind.value,
        "layout": model.layout.to_dict(),
        "scaler": model.scaler.to_dict() if model.scaler is not None else None,
        "seed": model.seed,
        "hyperparams": model.hyperparams.to_dict(),
        "params": _estimator_payload(model.kind, model.estimator),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def load_model(data: bytes) -> TrainedModel:
    try:
        doc = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"cannot decode model payload: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError("model payload must be a JSON object")
    version = doc.get("version")
    if version != MODEL_FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"model format version {version!r} is not supported "
            f"(expected {MODEL_FORMAT_VERSION})"
        )
    try:
        kind = ClassifierKind(doc["kind"])
        layout = FeatureLayout.from_dict(doc["layout"])
        scaler = (
            FeatureScaler.from_dict(doc["scaler"]) if doc["scaler"] is not None else None
        )
        hp = HyperParams.from_dict(doc["hyperparams"])
        seed = int(doc["seed"])
        estimator = _estimator_from_payload(kind, doc["params"], hp, seed)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model payload: {exc}") from exc
    return TrainedModel(kind, estimator, layout, scaler, seed, hp)


__all__ = [
    "BaseEstimator",
    "ClassifierKind",
    "ClassifierMixin",
    "DecisionTreeClassifier",
    "FeatureScaler",
    "GaussianNB",
    "HyperParams",
    "KNeighborsClassifier",
    "KernelSVC",
    "SCALED_BY_DEFAULT",
    "SGDClassifier",
    "TrainedModel",
    "load_model",
    "make_estimator",
    "predict",
    "rbf_kernel",
    "save_model",
    "train",
]
