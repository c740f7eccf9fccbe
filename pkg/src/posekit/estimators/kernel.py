"""RBF-kernel SVM trained with the kernelized Pegasos update.

Each one-vs-rest problem keeps a per-sample violation counter alpha; at
step t the decision value of the picked sample is

    f(x_i) = (1 / (lambda * t)) * sum_j alpha_j y_j k(x_j, x_i)

and alpha_i increments when y_i f(x_i) < 1.  After T total steps the
fitted dual coefficients are alpha_j y_j / (lambda * T).
"""

from __future__ import annotations

import numpy as np

from .base import (
    BaseEstimator,
    ClassifierMixin,
    check_X_y,
    check_array,
    check_is_fitted,
    seeded_generator,
)
from .neighbors import pairwise_sq_dists


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-gamma * pairwise_sq_dists(A, B))


class KernelSVC(BaseEstimator, ClassifierMixin):
    def __init__(
        self,
        gamma: float | str = "scale",
        epochs: int = 200,
        l2_lambda: float = 1e-4,
        random_state: int = 0,
    ):
        self.gamma = gamma
        self.epochs = epochs
        self.l2_lambda = l2_lambda
        self.random_state = random_state

    def _resolve_gamma(self, X: np.ndarray) -> float:
        if self.gamma == "scale":
            var = X.var()
            return 1.0 / (X.shape[1] * var) if var > 0 else 1.0
        gamma = float(self.gamma)
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        return gamma

    def fit(self, X, y) -> "KernelSVC":
        if self.epochs < 1 or self.l2_lambda <= 0:
            raise ValueError("invalid Pegasos hyperparameters")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        self.gamma_ = self._resolve_gamma(X)
        n = X.shape[0]
        K = rbf_kernel(X, X, self.gamma_)
        lam = self.l2_lambda
        total_steps = self.epochs * n
        dual = np.zeros((len(self.classes_), n))
        for k, cls in enumerate(self.classes_):
            y_signed = np.where(y == cls, 1.0, -1.0)
            rng = seeded_generator(self.random_state, k)
            signed_alpha = np.zeros(n)  # alpha_j * y_j, updated in place
            t = 0
            for _ in range(self.epochs):
                for i in rng.permutation(n):
                    t += 1
                    f = (signed_alpha @ K[i]) / (lam * t)
                    if y_signed[i] * f < 1.0:
                        signed_alpha[i] += y_signed[i]
            dual[k] = signed_alpha / (lam * total_steps)
        support = np.flatnonzero(np.any(dual != 0.0, axis=0))
        self.support_vectors_ = X[support]
        self.dual_coef_ = dual[:, support]
        return self

    def decision_function(self, X) -> np.ndarray:
        check_is_fitted(self, "dual_coef_")
        X = check_array(X)
        if X.shape[1] != self.support_vectors_.shape[1]:
            raise ValueError(
                f"dimension mismatch: got {X.shape[1]}, "
                f"expected {self.support_vectors_.shape[1]}"
            )
        Kq = rbf_kernel(X, self.support_vectors_, self.gamma_)
        return Kq @ self.dual_coef_.T

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]
