"""CART classification tree with Gini impurity.

Splits scan every feature in index order and every midpoint between
consecutive distinct sorted values in ascending order; the first strictly
best gain wins, which pins ties to the lowest feature index and then the
lowest threshold.  Leaves predict the majority class, ties going to the
lowest class index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BaseEstimator, ClassifierMixin, check_X_y, check_array, check_is_fitted


@dataclass
class _Node:
    feature: int = -1
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    value: int = -1  # class index for leaves

    @property
    def is_leaf(self) -> bool:
        return self.value >= 0


def _gini_from_counts(counts: np.ndarray, total: np.ndarray) -> np.ndarray:
    """Gini impurity per row of class counts; rows with total 0 yield 0."""
    total = np.asarray(total, dtype=np.float64)
    safe = np.where(total > 0, total, 1.0)
    p = counts / safe[..., np.newaxis]
    return 1.0 - np.sum(p * p, axis=-1)


def _best_split(X, y_idx, n_classes):
    """Return (gain, feature, threshold) of the best split, or None."""
    n = y_idx.shape[0]
    parent_counts = np.bincount(y_idx, minlength=n_classes).astype(np.float64)
    parent_gini = _gini_from_counts(parent_counts, np.array(float(n)))
    best = None  # (gain, feature, threshold)
    onehot = np.eye(n_classes)[y_idx]
    for f in range(X.shape[1]):
        xs = X[:, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        cuts = np.flatnonzero(xs_sorted[:-1] < xs_sorted[1:])
        if cuts.size == 0:
            continue
        left_counts = np.cumsum(onehot[order], axis=0)[cuts]
        nl = (cuts + 1).astype(np.float64)
        nr = n - nl
        gl = _gini_from_counts(left_counts, nl)
        gr = _gini_from_counts(parent_counts - left_counts, nr)
        gains = parent_gini - (nl * gl + nr * gr) / n
        j = int(np.argmax(gains))  # first max -> lowest threshold
        gain = float(gains[j])
        if gain > 0 and (best is None or gain > best[0]):
            threshold = 0.5 * (xs_sorted[cuts[j]] + xs_sorted[cuts[j] + 1])
            best = (gain, f, float(threshold))
    return best


class DecisionTreeClassifier(BaseEstimator, ClassifierMixin):
    def __init__(self, criterion: str = "gini", max_depth: int | None = None):
        self.criterion = criterion
        self.max_depth = max_depth

    def fit(self, X, y) -> "DecisionTreeClassifier":
        if self.criterion != "gini":
            raise ValueError(f"unsupported criterion '{self.criterion}'")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")
        X, y = check_X_y(X, y)
        self.classes_ = np.unique(y)
        self.n_features_ = X.shape[1]
        y_idx = np.searchsorted(self.classes_, y)
        n_classes = len(self.classes_)

        nodes: list[_Node] = []
        # (node_id, sample row indices, depth), built breadth-agnostic
        stack = [(self._new_node(nodes), np.arange(X.shape[0]), 0)]
        while stack:
            node_id, rows, depth = stack.pop()
            sub_y = y_idx[rows]
            counts = np.bincount(sub_y, minlength=n_classes)
            if counts.max() == rows.size or (
                self.max_depth is not None and depth >= self.max_depth
            ):
                nodes[node_id].value = int(np.argmax(counts))
                continue
            split = _best_split(X[rows], sub_y, n_classes)
            if split is None:
                nodes[node_id].value = int(np.argmax(counts))
                continue
            _, feature, threshold = split
            go_left = X[rows, feature] <= threshold
            nodes[node_id].feature = feature
            nodes[node_id].threshold = threshold
            left_id = self._new_node(nodes)
            right_id = self._new_node(nodes)
            nodes[node_id].left = left_id
            nodes[node_id].right = right_id
            stack.append((left_id, rows[go_left], depth + 1))
            stack.append((right_id, rows[~go_left], depth + 1))
        self.nodes_ = nodes
        return self

    @staticmethod
    def _new_node(nodes: list[_Node]) -> int:
        nodes.append(_Node())
        return len(nodes) - 1

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "nodes_")
        X = check_array(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(
                f"dimension mismatch: got {X.shape[1]}, expected {self.n_features_}"
            )
        out = np.empty(X.shape[0], dtype=self.classes_.dtype)
        for r in range(X.shape[0]):
            node = self.nodes_[0]
            while not node.is_leaf:
                node = self.nodes_[
                    node.left if X[r, node.feature] <= node.threshold else node.right
                ]
            out[r] = self.classes_[node.value]
        return out
