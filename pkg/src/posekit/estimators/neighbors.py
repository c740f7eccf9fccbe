"""k-nearest-neighbor classifier with fully deterministic tie handling.

Neighbor ranking breaks distance ties by training-sample index.  Among the
k selected neighbors, the majority class wins; vote ties go to the class
with the smallest summed distance, then to the lowest class index.
"""

from __future__ import annotations

import numpy as np

from .base import BaseEstimator, ClassifierMixin, check_X_y, check_array, check_is_fitted


def pairwise_sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between rows of A and rows of B."""
    aa = np.sum(A * A, axis=1)[:, np.newaxis]
    bb = np.sum(B * B, axis=1)[np.newaxis, :]
    return np.maximum(aa + bb - 2.0 * (A @ B.T), 0.0)


class KNeighborsClassifier(BaseEstimator, ClassifierMixin):
    def __init__(self, n_neighbors: int = 5, metric: str = "euclidean"):
        self.n_neighbors = n_neighbors
        self.metric = metric

    def fit(self, X, y) -> "KNeighborsClassifier":
        if self.metric != "euclidean":
            raise ValueError(f"unsupported metric '{self.metric}'")
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be positive")
        X, y = check_X_y(X, y)
        if self.n_neighbors > X.shape[0]:
            raise ValueError(
                f"n_neighbors={self.n_neighbors} exceeds the "
                f"{X.shape[0]} training samples"
            )
        self.X_ = X
        self.y_ = y
        self.classes_ = np.unique(y)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "X_")
        X = check_array(X)
        if X.shape[1] != self.X_.shape[1]:
            raise ValueError(
                f"dimension mismatch: got {X.shape[1]}, expected {self.X_.shape[1]}"
            )
        sq = pairwise_sq_dists(X, self.X_)
        k = self.n_neighbors
        out = np.empty(X.shape[0], dtype=self.classes_.dtype)
        y_idx = np.searchsorted(self.classes_, self.y_)
        for r in range(X.shape[0]):
            nn = np.argsort(sq[r], kind="stable")[:k]
            dists = np.sqrt(sq[r, nn])
            labels = y_idx[nn]
            votes = np.bincount(labels, minlength=len(self.classes_))
            top = votes.max()
            tied = np.flatnonzero(votes == top)
            if tied.size > 1:
                sums = np.array(
                    [dists[labels == c].sum() for c in tied]
                )
                tied = tied[np.flatnonzero(sums == sums.min())]
            out[r] = self.classes_[tied[0]]
        return out
