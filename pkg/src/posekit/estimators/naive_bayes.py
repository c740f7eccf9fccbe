"""Gaussian naive Bayes with per-class diagonal covariance."""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, ClassifierMixin, check_X_y, check_array, check_is_fitted

VAR_FLOOR = 1e-9


class GaussianNB(BaseEstimator, ClassifierMixin):
    def __init__(self, var_floor: float = VAR_FLOOR):
        self.var_floor = var_floor

    def fit(self, X, y) -> "GaussianNB":
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        n, d = X.shape
        self.theta_ = np.zeros((len(self.classes_), d))
        self.var_ = np.zeros((len(self.classes_), d))
        counts = np.zeros(len(self.classes_))
        for k, cls in enumerate(self.classes_):
            Xc = X[y == cls]
            counts[k] = Xc.shape[0]
            self.theta_[k] = Xc.mean(axis=0)
            self.var_[k] = np.maximum(Xc.var(axis=0), self.var_floor)
        self.class_prior_ = counts / n
        return self

    def _joint_log_likelihood(self, X) -> np.ndarray:
        check_is_fitted(self, "theta_")
        X = check_array(X)
        if X.shape[1] != self.theta_.shape[1]:
            raise ValueError(
                f"dimension mismatch: got {X.shape[1]}, expected {self.theta_.shape[1]}"
            )
        jll = np.empty((X.shape[0], len(self.classes_)))
        for k in range(len(self.classes_)):
            diff = X - self.theta_[k]
            jll[:, k] = (
                np.log(self.class_prior_[k])
                - 0.5 * np.sum(np.log(2.0 * np.pi * self.var_[k]))
                - 0.5 * np.sum(diff * diff / self.var_[k], axis=1)
            )
        return jll

    def predict(self, X) -> np.ndarray:
        jll = self._joint_log_likelihood(X)
        return self.classes_[np.argmax(jll, axis=1)]
