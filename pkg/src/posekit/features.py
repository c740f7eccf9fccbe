"""Flattening pose sequences into fixed-layout feature vectors.

Depth is discarded; only x and y survive.  The flat index of (axis a,
joint j, frame t) is ``a*(J*T) + j*T + t``, axis-major with joints in
canonical order.  Sequences longer than the layout's frame count are
truncated, shorter ones are padded by repeating the final frame.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingJointError
from .keypoints import ActivityClass, JointId, PoseSequence, ordered_joints

AXES: tuple[str, ...] = ("x", "y")
DEFAULT_FRAME_COUNT = 50

SCALE_FLOOR = 1e-8


@dataclass(frozen=True)
class FeatureLayout:
    """The bijection between (axis, joint, frame) and flat vector index."""

    joints: tuple[JointId, ...]
    frame_count: int = DEFAULT_FRAME_COUNT
    axes: tuple[str, ...] = AXES

    def __post_init__(self):
        if not self.joints:
            raise ValueError("layout needs at least one joint")
        if list(self.joints) != sorted(set(self.joints), key=lambda j: j.value):
            raise ValueError("layout joints must be unique and in canonical order")
        if self.frame_count < 1:
            raise ValueError("frame_count must be positive")
        if self.axes != AXES:
            raise ValueError("layout axes are fixed to (x, y)")

    @classmethod
    def from_mask(
        cls, mask: Iterable[JointId], frame_count: int = DEFAULT_FRAME_COUNT
    ) -> "FeatureLayout":
        return cls(ordered_joints(mask), frame_count)

    @property
    def dimension(self) -> int:
        return len(self.joints) * len(self.axes) * self.frame_count

    def index(self, axis: int, joint: JointId, frame: int) -> int:
        j = self.joints.index(joint)
        return axis * (len(self.joints) * self.frame_count) + j * self.frame_count + frame

    def column_names(self) -> list[str]:
        return [
            f"a{axis}_j{joint.key}_t{t}"
            for axis in self.axes
            for joint in self.joints
            for t in range(self.frame_count)
        ]

    def to_dict(self) -> dict:
        return {
            "joints": [j.key for j in self.joints],
            "frame_count": self.frame_count,
            "axes": list(self.axes),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FeatureLayout":
        joints = tuple(JointId[name.upper()] for name in payload["joints"])
        return cls(joints, int(payload["frame_count"]), tuple(payload["axes"]))


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """A flat per-sequence feature vector plus its label and layout."""

    values: np.ndarray
    label: ActivityClass | None
    layout: FeatureLayout

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.shape != (self.layout.dimension,):
            raise ValueError(
                f"vector length {values.shape} does not match layout "
                f"dimension {self.layout.dimension}"
            )
        if not np.isfinite(values).all():
            raise ValueError("feature values must be finite")


def featurize(seq: PoseSequence, layout: FeatureLayout) -> FeatureVector:
    """Flatten one sequence into the layout's fixed vector."""
    missing = set(layout.joints) - set(seq.joints)
    if missing:
        names = ", ".join(sorted(j.key for j in missing))
        raise MissingJointError(f"sequence '{seq.source_id}' lacks joints: {names}")
    cols = [seq.joints.index(j) for j in layout.joints]
    xy = seq.coords[:, cols, :2]  # (T, J, 2); z is never read
    T = layout.frame_count
    if xy.shape[0] >= T:
        xy = xy[:T]
    else:
        pad = np.repeat(xy[-1:], T - xy.shape[0], axis=0)
        xy = np.concatenate([xy, pad], axis=0)
    # (T, J, 2) -> (axis, joint, frame) -> flat
    values = xy.transpose(2, 1, 0).reshape(-1)
    return FeatureVector(values, seq.label, layout)


def featurize_all(
    sequences: Iterable[PoseSequence], layout: FeatureLayout
) -> list[FeatureVector]:
    return [featurize(seq, layout) for seq in sequences]


def to_matrix(vectors: Sequence[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """Stack vectors into (X, y); unlabeled vectors get label -1."""
    if not vectors:
        raise ValueError("no feature vectors given")
    layout = vectors[0].layout
    if any(v.layout != layout for v in vectors):
        raise ValueError("feature vectors mix layouts")
    X = np.stack([v.values for v in vectors])
    y = np.array(
        [v.label.value if v.label is not None else -1 for v in vectors], dtype=np.int64
    )
    return X, y


class FeatureScaler:
    """Per-dimension standardization fitted on training data only."""

    def __init__(self):
        self.mean_: np.ndarray | None = None
        self.scale_: np.ndarray | None = None

    def fit(self, X: np.ndarray) -> "FeatureScaler":
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1:
            raise ValueError("scaler needs a non-empty (n, d) matrix")
        self.mean_ = X.mean(axis=0)
        self.scale_ = np.maximum(X.std(axis=0), SCALE_FLOOR)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        if self.mean_ is None or self.scale_ is None:
            raise ValueError("scaler is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.mean_.shape[0]:
            raise ValueError(
                f"dimension mismatch: got {X.shape[-1]}, expected {self.mean_.shape[0]}"
            )
        return (X - self.mean_) / self.scale_

    def fit_transform(self, X: np.ndarray) -> np.ndarray:
        return self.fit(X).transform(X)

    def to_dict(self) -> dict:
        if self.mean_ is None or self.scale_ is None:
            raise ValueError("scaler is not fitted")
        return {"mean": self.mean_.tolist(), "scale": self.scale_.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "FeatureScaler":
        scaler = cls()
        scaler.mean_ = np.asarray(payload["mean"], dtype=np.float64)
        scaler.scale_ = np.asarray(payload["scale"], dtype=np.float64)
        return scaler


def standardize_fit(train: Sequence[FeatureVector]) -> FeatureScaler:
    X, _ = to_matrix(train)
    return FeatureScaler().fit(X)


def standardize_apply(scaler: FeatureScaler, v: FeatureVector) -> FeatureVector:
    values = scaler.transform(v.values[np.newaxis, :])[0]
    return FeatureVector(values, v.label, v.layout)


def export_csv(vectors: Sequence[FeatureVector], path: str | Path | None = None) -> str:
    """Write feature vectors as CSV; returns the rendered text."""
    if not vectors:
        raise ValueError("no feature vectors given")
    layout = vectors[0].layout
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(layout.column_names() + ["label"])
    for v in vectors:
        if v.layout != layout:
            raise ValueError("feature vectors mix layouts")
        label = v.label.key if v.label is not None else ""
        writer.writerow([float(x) for x in v.values] + [label])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
