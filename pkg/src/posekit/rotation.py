"""Rotation about the vertical axis and the one-degree augmentation sweep.

The yaw map is

    x' =  x*cos(t) + z*sin(t)
    y' =  y
    z' = -x*sin(t) + z*cos(t)

applied either about the origin or about a per-frame pivot line through the
hip midpoint in the (x, z) plane.  Pitch and roll are exposed for
experimentation but only yaw carries validated semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import MissingPivotError
from .keypoints import JointId, PoseFrame, PoseSequence

# Full turn in one-degree steps, without the duplicate -180/+180 view.
DEFAULT_ANGLES: tuple[int, ...] = tuple(range(-180, 180))


class Axis(Enum):
    YAW = "yaw"
    PITCH = "pitch"
    ROLL = "roll"


class PivotPolicy(Enum):
    HIP_MIDPOINT = "hip_midpoint"
    ORIGIN = "origin"


@dataclass(frozen=True)
class RotationSpec:
    """A single rotation: integer degrees, axis, and pivot placement."""

    theta_deg: int
    axis: Axis = Axis.YAW
    pivot_policy: PivotPolicy = PivotPolicy.HIP_MIDPOINT

    def __post_init__(self):
        _check_angle(self.theta_deg)


def _check_angle(theta_deg: int) -> int:
    try:
        theta = int(theta_deg)
    except (TypeError, ValueError):
        raise ValueError(f"angle must be an integer, got {theta_deg!r}") from None
    if theta != theta_deg:
        raise ValueError(f"angle must be an integer, got {theta_deg!r}")
    if not -180 <= theta <= 179:
        raise ValueError(f"angle {theta} outside [-180, 179]")
    return theta


def rotation_matrix(theta_deg: float, axis: Axis = Axis.YAW) -> np.ndarray:
    """3x3 rotation matrix for *theta_deg* about the given body axis."""
    t = math.radians(theta_deg)
    c, s = math.cos(t), math.sin(t)
    if axis is Axis.YAW:
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if axis is Axis.PITCH:
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotate_point(
    p: Sequence[float], theta_deg: float
) -> tuple[float, float, float]:
    """Rotate one (x, y, z) point by *theta_deg* about the y axis."""
    t = math.radians(theta_deg)
    c, s = math.cos(t), math.sin(t)
    x, y, z = p
    return (x * c + z * s, y, -x * s + z * c)


def rotate_coords(
    coords: np.ndarray, theta_deg: float, axis: Axis = Axis.YAW
) -> np.ndarray:
    """Rotate an (..., 3) coordinate array about the origin."""
    return np.asarray(coords) @ rotation_matrix(theta_deg, axis).T


# Pivot translation leaves the rotation-axis component untouched.
_PIVOT_FREE_COMPONENT = {Axis.YAW: 1, Axis.PITCH: 0, Axis.ROLL: 2}


def _pivots(seq_coords: np.ndarray, joints: tuple[JointId, ...], axis: Axis) -> np.ndarray:
    """Per-frame hip-midpoint pivot, zeroed along the rotation axis."""
    try:
        li = joints.index(JointId.LEFT_HIP)
        ri = joints.index(JointId.RIGHT_HIP)
    except ValueError:
        raise MissingPivotError(
            "hip_midpoint pivot needs both left_hip and right_hip"
        ) from None
    pivot = 0.5 * (seq_coords[..., li, :] + seq_coords[..., ri, :])
    pivot[..., _PIVOT_FREE_COMPONENT[axis]] = 0.0
    return pivot


def rotate_frame(frame: PoseFrame, spec: RotationSpec) -> PoseFrame:
    """Rotate every landmark of a frame; visibility is preserved.

    At zero degrees the input frame is returned unchanged, so the identity
    is exact even under a pivot translation.
    """
    if spec.theta_deg == 0:
        return frame
    coords = frame.coords
    if spec.pivot_policy is PivotPolicy.HIP_MIDPOINT:
        pivot = _pivots(coords[np.newaxis], frame.joints, spec.axis)[0]
        rotated = rotate_coords(coords - pivot, spec.theta_deg, spec.axis) + pivot
    else:
        rotated = rotate_coords(coords, spec.theta_deg, spec.axis)
    return PoseFrame(frame.joints, rotated, frame.visibility, frame.frame_index)


def rotate_sequence(seq: PoseSequence, spec: RotationSpec) -> PoseSequence:
    """Rotate every frame of a sequence (pivot recomputed per frame)."""
    if spec.theta_deg == 0:
        return seq
    coords = seq.coords
    if spec.pivot_policy is PivotPolicy.HIP_MIDPOINT:
        pivot = _pivots(coords, seq.joints, spec.axis)[:, np.newaxis, :]
        rotated = rotate_coords(coords - pivot, spec.theta_deg, spec.axis) + pivot
    else:
        rotated = rotate_coords(coords, spec.theta_deg, spec.axis)
    return PoseSequence(
        seq.joints, rotated, seq.visibility, seq.label, seq.source_id, seq.fps
    )


def augment_sequence(
    seq: PoseSequence,
    angles: Iterable[int] | None = None,
    pivot: PivotPolicy = PivotPolicy.HIP_MIDPOINT,
    axis: Axis = Axis.YAW,
) -> list[PoseSequence]:
    """One rotated copy of *seq* per angle.

    The zero-degree entry is the original sequence itself; every other copy
    gets ``#rot<angle>`` appended to its source_id.
    """
    angle_list = DEFAULT_ANGLES if angles is None else [_check_angle(a) for a in angles]
    if not angle_list:
        raise ValueError("angle list must not be empty")
    out = []
    for theta in angle_list:
        if theta == 0:
            out.append(seq)
            continue
        spec = RotationSpec(theta, axis=axis, pivot_policy=pivot)
        rotated = rotate_sequence(seq, spec)
        out.append(
            PoseSequence(
                rotated.joints,
                rotated.coords,
                rotated.visibility,
                rotated.label,
                f"{seq.source_id}#rot{theta}",
                rotated.fps,
            )
        )
    return out


def augment_dataset(
    sequences: Iterable[PoseSequence],
    angles: Iterable[int] | None = None,
    pivot: PivotPolicy = PivotPolicy.HIP_MIDPOINT,
    axis: Axis = Axis.YAW,
) -> list[PoseSequence]:
    """Sweep every sequence through the angle set, order-deterministic."""
    angle_list = DEFAULT_ANGLES if angles is None else list(angles)
    out: list[PoseSequence] = []
    for seq in sequences:
        out.extend(augment_sequence(seq, angle_list, pivot=pivot, axis=axis))
    return out
