"""One-vs-rest linear classifiers trained by per-sample SGD.

Each binary problem minimizes

    l2_lambda/2 * ||w||^2  +  mean_i loss(y_i * (w.x_i + b))

with loss either the hinge max(0, 1 - m) or the logistic log(1 + e^-m).
Sample order is reshuffled every epoch (seeded), and the step size follows
the inverse scaling schedule eta_t = eta0 / (1 + l2_lambda*eta0*t).
"""

from __future__ import annotations

import math

import numpy as np

from .base import (
    BaseEstimator,
    ClassifierMixin,
    check_X_y,
    check_array,
    check_is_fitted,
    seeded_generator,
)


def hinge_loss(margins: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - margins)


def hinge_margin_grad(margins: np.ndarray) -> np.ndarray:
    """d loss / d margin; subgradient 0 at the kink."""
    return np.where(margins < 1.0, -1.0, 0.0)


def logistic_loss(margins: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, -margins)


def logistic_margin_grad(margins: np.ndarray) -> np.ndarray:
    m = np.asarray(margins, dtype=np.float64)
    # -sigmoid(-m), computed stably for large |m|
    return -0.5 * (1.0 - np.tanh(0.5 * m))


LOSSES = {
    "hinge": (hinge_loss, hinge_margin_grad),
    "log_loss": (logistic_loss, logistic_margin_grad),
}


def regularized_objective(
    X: np.ndarray, y_signed: np.ndarray, w: np.ndarray, b: float,
    l2_lambda: float, loss: str,
) -> float:
    loss_fn, _ = LOSSES[loss]
    margins = y_signed * (X @ w + b)
    return float(0.5 * l2_lambda * (w @ w) + loss_fn(margins).mean())


class SGDClassifier(BaseEstimator, ClassifierMixin):
    """Linear SVM (hinge) or logistic regression (log_loss), OVR multiclass."""

    def __init__(
        self,
        loss: str = "hinge",
        epochs: int = 200,
        learning_rate: float = 1e-3,
        l2_lambda: float = 1e-4,
        random_state: int = 0,
        record_objective: bool = False,
    ):
        self.loss = loss
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2_lambda = l2_lambda
        self.random_state = random_state
        self.record_objective = record_objective

    def fit(self, X, y) -> "SGDClassifier":
        if self.loss not in LOSSES:
            raise ValueError(f"unknown loss '{self.loss}'")
        if self.epochs < 1 or self.learning_rate <= 0 or self.l2_lambda < 0:
            raise ValueError("invalid SGD hyperparameters")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        n, d = X.shape
        self.coef_ = np.zeros((len(self.classes_), d))
        self.intercept_ = np.zeros(len(self.classes_))
        history = []
        for k, cls in enumerate(self.classes_):
            y_signed = np.where(y == cls, 1.0, -1.0)
            rng = seeded_generator(self.random_state, k)
            w, b, objs = self._fit_binary(X, y_signed, rng)
            self.coef_[k] = w
            self.intercept_[k] = b
            history.append(objs)
        self.objective_history_ = np.array(history) if self.record_objective else None
        return self

    def _fit_binary(self, X, y_signed, rng):
        # Hot loop; the inlined gradients mirror LOSSES exactly.
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        eta0 = self.learning_rate
        lam = self.l2_lambda
        lam_eta0 = lam * eta0
        hinge = self.loss == "hinge"
        t = 0
        objs = []
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = eta0 / (1.0 + lam_eta0 * t)
                xi = X[i]
                yi = y_signed[i]
                m = yi * (float(w @ xi) + b)
                if lam:
                    w *= 1.0 - eta * lam
                if hinge:
                    if m < 1.0:
                        coef = eta * yi
                        w += coef * xi
                        b += coef
                else:
                    g = -0.5 * (1.0 - math.tanh(0.5 * m))
                    coef = -eta * g * yi
                    w += coef * xi
                    b += coef
            if self.record_objective:
                objs.append(
                    regularized_objective(X, y_signed, w, b, lam, self.loss)
                )
        return w, b, objs

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "coef_")
        X = check_array(X)
        if X.shape[1] != self.coef_.shape[1]:
            raise ValueError(
                f"dimension mismatch: got {X.shape[1]}, expected {self.coef_.shape[1]}"
            )
        return X @ self.coef_.T + self.intercept_

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]
