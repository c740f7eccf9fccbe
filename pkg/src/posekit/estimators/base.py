"""Minimal estimator plumbing: get_params/set_params and input checks."""

from __future__ import annotations

import inspect

import numpy as np


class BaseEstimator:
    """Parameter introspection compatible with the wider estimator ecosystem.

    Constructor arguments must be stored verbatim on attributes of the same
    name; fitted state uses trailing-underscore names.
    """

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind is not inspect.Parameter.VAR_KEYWORD
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "BaseEstimator":
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


class ClassifierMixin:
    def score(self, X, y) -> float:
        y = np.asarray(y)
        return float(np.mean(self.predict(X) == y))


def check_array(X, *, ensure_2d: bool = True) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if ensure_2d:
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {X.shape}")
        if X.shape[0] == 0 or X.shape[1] == 0:
            raise ValueError("empty input array")
    if not np.isfinite(X).all():
        raise ValueError("input contains NaN or infinity")
    return X


def check_X_y(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = check_array(X)
    y = np.asarray(y, dtype=np.int64).ravel()
    if y.shape[0] != X.shape[0]:
        raise ValueError(
            f"X has {X.shape[0]} samples but y has {y.shape[0]} labels"
        )
    return X, y


def check_is_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise ValueError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )


def seeded_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Deterministic per-stream generator derived from a 64-bit seed."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, stream]))
    )
