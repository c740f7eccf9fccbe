"""Confusion matrices and the accuracy / macro precision-recall-F1 report."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .estimators import TrainedModel
from .features import FeatureVector, to_matrix
from .keypoints import ActivityClass

N_CLASSES = len(ActivityClass)
CLASS_NAMES = tuple(c.key for c in ActivityClass)


@dataclass(frozen=True)
class RunMeta:
    """Provenance of one evaluation run."""

    kind: str
    augmented: bool
    mask: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "augmented": self.augmented,
            "mask": self.mask,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "RunMeta":
        return cls(
            kind=payload["kind"],
            augmented=bool(payload["augmented"]),
            mask=payload["mask"],
            seed=int(payload["seed"]),
        )


@dataclass(frozen=True)
class PerClassMetrics:
    precision: float
    recall: float
    f1: float
    # True when the class was never predicted, so precision fell back to 0.
    zero_predictions: bool

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "zero_predictions": self.zero_predictions,
        }


@dataclass(frozen=True)
class EvalReport:
    matrix: np.ndarray  # rows true class, columns predicted class
    accuracy: float
    precision_macro: float
    recall_macro: float
    f1_macro: float
    per_class: tuple[PerClassMetrics, ...]
    run_meta: RunMeta | None = None

    def to_dict(self) -> dict:
        return {
            "labels": list(CLASS_NAMES),
            "matrix": self.matrix.tolist(),
            "accuracy": self.accuracy,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
            "per_class": [m.to_dict() for m in self.per_class],
            "run_meta": self.run_meta.to_dict() if self.run_meta else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "EvalReport":
        per_class = tuple(
            PerClassMetrics(
                m["precision"], m["recall"], m["f1"], m["zero_predictions"]
            )
            for m in payload["per_class"]
        )
        meta = payload.get("run_meta")
        return cls(
            matrix=np.asarray(payload["matrix"], dtype=np.int64),
            accuracy=payload["accuracy"],
            precision_macro=payload["precision_macro"],
            recall_macro=payload["recall_macro"],
            f1_macro=payload["f1_macro"],
            per_class=per_class,
            run_meta=RunMeta.from_dict(meta) if meta else None,
        )


def confusion_matrix(
    y_true: Sequence[int], y_pred: Sequence[int], n_classes: int = N_CLASSES
) -> np.ndarray:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred lengths differ")
    if y_true.size == 0:
        raise ValueError("cannot evaluate zero samples")
    for arr, name in ((y_true, "y_true"), (y_pred, "y_pred")):
        if arr.min() < 0 or arr.max() >= n_classes:
            raise ValueError(f"{name} contains labels outside [0, {n_classes})")
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (y_true, y_pred), 1)
    return matrix


def report_from_matrix(
    matrix: np.ndarray, run_meta: RunMeta | None = None
) -> EvalReport:
    """Derive all metrics from a confusion matrix.

    A class never predicted gets precision 0 (flagged) instead of NaN.
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("confusion matrix must be square")
    if (matrix < 0).any():
        raise ValueError("confusion matrix counts must be non-negative")
    total = int(matrix.sum())
    if total == 0:
        raise ValueError("confusion matrix is empty")
    diag = np.diag(matrix)
    row = matrix.sum(axis=1)  # actual per class
    col = matrix.sum(axis=0)  # predicted per class
    per_class = []
    for c in range(matrix.shape[0]):
        precision = float(diag[c] / col[c]) if col[c] > 0 else 0.0
        recall = float(diag[c] / row[c]) if row[c] > 0 else 0.0
        f1 = (
            2.0 * precision * recall / (precision + recall)
            if precision + recall > 0
            else 0.0
        )
        per_class.append(
            PerClassMetrics(precision, recall, f1, zero_predictions=col[c] == 0)
        )
    return EvalReport(
        matrix=matrix,
        accuracy=float(diag.sum() / total),
        precision_macro=float(np.mean([m.precision for m in per_class])),
        recall_macro=float(np.mean([m.recall for m in per_class])),
        f1_macro=float(np.mean([m.f1 for m in per_class])),
        per_class=tuple(per_class),
        run_meta=run_meta,
    )


def evaluate(
    model: TrainedModel,
    test: Sequence[FeatureVector],
    run_meta: RunMeta | None = None,
) -> EvalReport:
    """Predict a labeled test set and assemble the metric report."""
    if not test:
        raise ValueError("test set is empty")
    if any(v.label is None for v in test):
        raise ValueError("test vectors must all be labeled")
    X, y_true = to_matrix(test)
    y_pred = model.predict_matrix(X)
    matrix = confusion_matrix(y_true, y_pred)
    return report_from_matrix(matrix, run_meta)
