"""Keypoint domain types, the JSONL wire format, and joint selection.

The wire format is one JSON object per line, one line per video frame:

    {"source_id": str, "label": str|null, "frame_index": int, "fps": number,
     "landmarks": {"left_shoulder": {"x": f, "y": f, "z": f, "v": f}, ...}}

Frames of one video are contiguous and ordered.  A landmark record may carry
any number of named joints (e.g. all 33 of an upstream estimator); only the
12 canonical ones are retained, keyed by name.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    EmptyInputError,
    MissingJointError,
    ParseError,
    SchemaError,
)


class JointId(Enum):
    """The 12 canonical joints, in the fixed order used everywhere."""

    LEFT_SHOULDER = 0
    RIGHT_SHOULDER = 1
    LEFT_ELBOW = 2
    RIGHT_ELBOW = 3
    LEFT_WRIST = 4
    RIGHT_WRIST = 5
    LEFT_HIP = 6
    RIGHT_HIP = 7
    LEFT_KNEE = 8
    RIGHT_KNEE = 9
    LEFT_ANKLE = 10
    RIGHT_ANKLE = 11

    @property
    def key(self) -> str:
        """Wire-format name, e.g. ``left_shoulder``."""
        return self.name.lower()


CANONICAL_JOINTS: tuple[JointId, ...] = tuple(JointId)

_JOINT_BY_KEY = {j.key: j for j in CANONICAL_JOINTS}


class ActivityClass(Enum):
    """The five exercise classes, in canonical (index) order."""

    ANGLED_LEG_PRESS = 0
    CHIN_UP = 1
    DUMBBELL_LUNGE = 2
    HACK_SQUAT = 3
    SQUAT = 4

    @property
    def key(self) -> str:
        return self.name.lower()


_CLASS_BY_KEY = {c.key: c for c in ActivityClass}

ALL_12 = frozenset(CANONICAL_JOINTS)
NO_RIGHT_SHOULDER = frozenset(ALL_12 - {JointId.RIGHT_SHOULDER})
LEFT_6 = frozenset(
    {
        JointId.LEFT_SHOULDER,
        JointId.LEFT_ELBOW,
        JointId.LEFT_WRIST,
        JointId.LEFT_HIP,
        JointId.LEFT_KNEE,
        JointId.LEFT_ANKLE,
    }
)
RIGHT_6 = frozenset(
    {
        JointId.RIGHT_SHOULDER,
        JointId.RIGHT_ELBOW,
        JointId.RIGHT_WRIST,
        JointId.RIGHT_HIP,
        JointId.RIGHT_KNEE,
        JointId.RIGHT_ANKLE,
    }
)

# Named masks for the keypoint-subset ablation grid.
JOINT_MASKS: dict[str, frozenset[JointId]] = {
    "all12": ALL_12,
    "no_right_shoulder": NO_RIGHT_SHOULDER,
    "left6": LEFT_6,
    "right6": RIGHT_6,
}


def ordered_joints(mask: Iterable[JointId]) -> tuple[JointId, ...]:
    """Return *mask* as a tuple in canonical joint order."""
    mask = frozenset(mask)
    return tuple(j for j in CANONICAL_JOINTS if j in mask)


@dataclass(frozen=True)
class Landmark:
    """One joint observation: normalized image x/y, relative depth z."""

    x: float
    y: float
    z: float
    visibility: float


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PoseFrame:
    """One frame's landmarks for a (possibly reduced) set of joints."""

    joints: tuple[JointId, ...]
    coords: np.ndarray  # (J, 3) x/y/z
    visibility: np.ndarray  # (J,)
    frame_index: int

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(self.coords))
        object.__setattr__(self, "visibility", _readonly(self.visibility))
        if self.coords.shape != (len(self.joints), 3):
            raise ValueError(
                f"coords shape {self.coords.shape} does not match "
                f"{len(self.joints)} joints"
            )
        if self.visibility.shape != (len(self.joints),):
            raise ValueError("visibility shape does not match joints")

    @property
    def landmarks(self) -> dict[JointId, Landmark]:
        return {
            j: Landmark(*self.coords[i], self.visibility[i])
            for i, j in enumerate(self.joints)
        }

    def landmark(self, joint: JointId) -> Landmark:
        i = self.joints.index(joint)
        return Landmark(*self.coords[i], self.visibility[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PoseFrame):
            return NotImplemented
        return (
            self.joints == other.joints
            and self.frame_index == other.frame_index
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.visibility, other.visibility)
        )


@dataclass(frozen=True, eq=False)
class PoseSequence:
    """An ordered run of frames from one video, plus its label."""

    joints: tuple[JointId, ...]
    coords: np.ndarray  # (T, J, 3)
    visibility: np.ndarray  # (T, J)
    label: ActivityClass | None
    source_id: str
    fps: float = 30.0

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(self.coords))
        object.__setattr__(self, "visibility", _readonly(self.visibility))
        if self.coords.ndim != 3 or self.coords.shape[0] < 1:
            raise ValueError("coords must be a non-empty (T, J, 3) array")
        if self.coords.shape[1] != len(self.joints) or self.coords.shape[2] != 3:
            raise ValueError("coords shape does not match joints")
        if self.visibility.shape != self.coords.shape[:2]:
            raise ValueError("visibility shape does not match coords")
        if self.fps <= 0:
            raise ValueError("fps must be positive")

    @property
    def frame_count(self) -> int:
        return self.coords.shape[0]

    def __len__(self) -> int:
        return self.frame_count

    @property
    def frames(self) -> list[PoseFrame]:
        return [
            PoseFrame(self.joints, self.coords[t], self.visibility[t], t)
            for t in range(self.frame_count)
        ]

    @classmethod
    def from_frames(
        cls,
        frames: list[PoseFrame],
        label: ActivityClass | None,
        source_id: str,
        fps: float = 30.0,
    ) -> "PoseSequence":
        if not frames:
            raise ValueError("a sequence needs at least one frame")
        joints = frames[0].joints
        if any(f.joints != joints for f in frames):
            raise ValueError("all frames must share the same joint set")
        coords = np.stack([f.coords for f in frames])
        vis = np.stack([f.visibility for f in frames])
        return cls(joints, coords, vis, label, source_id, fps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PoseSequence):
            return NotImplemented
        return (
            self.joints == other.joints
            and self.label == other.label
            and self.source_id == other.source_id
            and self.fps == other.fps
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.visibility, other.visibility)
        )


@dataclass
class _RawFrame:
    line_number: int
    source_id: str
    label: str | None
    frame_index: int
    fps: float
    landmarks: dict[JointId, tuple[float, float, float, float]] = field(
        default_factory=dict
    )


def _parse_line(line: str, line_number: int) -> _RawFrame:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", line_number) from exc
    if not isinstance(obj, dict):
        raise ParseError("frame record must be a JSON object", line_number)

    source_id = obj.get("source_id")
    if not isinstance(source_id, str) or not source_id:
        raise ParseError("missing or invalid 'source_id'", line_number)
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("'label' must be a string or null", line_number)
    frame_index = obj.get("frame_index")
    if not isinstance(frame_index, int) or isinstance(frame_index, bool) or frame_index < 0:
        raise ParseError("'frame_index' must be a non-negative integer", line_number)
    fps = obj.get("fps")
    if not isinstance(fps, (int, float)) or isinstance(fps, bool) or not math.isfinite(fps):
        raise ParseError("'fps' must be a finite number", line_number)
    raw_landmarks = obj.get("landmarks")
    if not isinstance(raw_landmarks, dict):
        raise ParseError("'landmarks' must be an object", line_number)

    landmarks: dict[JointId, tuple[float, float, float, float]] = {}
    for name, lm in raw_landmarks.items():
        joint = _JOINT_BY_KEY.get(name)
        if joint is None:
            continue  # non-canonical joints are dropped
        if not isinstance(lm, dict):
            raise ParseError(f"landmark '{name}' must be an object", line_number)
        try:
            values = tuple(float(lm[k]) for k in ("x", "y", "z", "v"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(
                f"landmark '{name}' needs numeric x/y/z/v fields", line_number
            ) from exc
        if not all(math.isfinite(v) for v in values):
            raise SchemaError(f"landmark '{name}' has non-finite values", line_number)
        if not 0.0 <= values[3] <= 1.0:
            raise SchemaError(
                f"landmark '{name}' visibility outside [0, 1]", line_number
            )
        landmarks[joint] = values
    return _RawFrame(line_number, source_id, label, frame_index, float(fps), landmarks)


def _build_sequence(group: list[_RawFrame]) -> PoseSequence:
    first = group[0]
    for offset, rec in enumerate(group):
        if rec.frame_index != offset:
            raise SchemaError(
                f"frame_index {rec.frame_index} of '{rec.source_id}' breaks the "
                f"contiguous 0..N-1 order (expected {offset})",
                rec.line_number,
            )
        if rec.label != first.label:
            raise SchemaError(
                f"conflicting labels within '{rec.source_id}'", rec.line_number
            )
        if rec.fps != first.fps:
            raise SchemaError(
                f"conflicting fps within '{rec.source_id}'", rec.line_number
            )
    if first.fps <= 0:
        raise SchemaError(f"fps must be positive for '{first.source_id}'", first.line_number)

    label: ActivityClass | None = None
    if first.label is not None:
        label = _CLASS_BY_KEY.get(first.label)
        if label is None:
            raise SchemaError(
                f"unknown class label '{first.label}'", first.line_number
            )

    n = len(group)
    coords = np.zeros((n, 12, 3))
    vis = np.zeros((n, 12))
    present = np.zeros((n, 12), dtype=bool)
    for t, rec in enumerate(group):
        for joint, (x, y, z, v) in rec.landmarks.items():
            coords[t, joint.value] = (x, y, z)
            vis[t, joint.value] = v
            present[t, joint.value] = True

    # Missing joints: carry the most recent observation forward; joints never
    # yet seen borrow the first future observation.  Filled entries get
    # visibility 0 so downstream consumers can tell them apart.
    for j in range(12):
        col = present[:, j]
        if not col.any():
            raise SchemaError(
                f"joint '{CANONICAL_JOINTS[j].key}' missing from every frame of "
                f"'{first.source_id}'",
                first.line_number,
            )
        if col.all():
            continue
        obs = np.flatnonzero(col)
        prev = np.searchsorted(obs, np.arange(n), side="right") - 1
        fill_from = obs[np.where(prev >= 0, prev, 0)]  # next future obs when prev<0
        missing = ~col
        coords[missing, j] = coords[fill_from[missing], j]
        vis[missing, j] = 0.0

    return PoseSequence(CANONICAL_JOINTS, coords, vis, label, first.source_id, first.fps)


def parse_jsonl(data: bytes | str) -> list[PoseSequence]:
    """Parse a JSONL keypoint stream into one PoseSequence per video."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    records: list[_RawFrame] = []
    for line_number, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        records.append(_parse_line(line, line_number))
    if not records:
        raise EmptyInputError("no frame records in input")

    sequences: list[PoseSequence] = []
    seen: set[str] = set()
    group: list[_RawFrame] = [records[0]]
    for rec in records[1:]:
        if rec.source_id == group[-1].source_id:
            group.append(rec)
            continue
        sequences.append(_build_sequence(group))
        seen.add(group[0].source_id)
        if rec.source_id in seen:
            raise ParseError(
                f"source_id '{rec.source_id}' reappears non-contiguously",
                rec.line_number,
            )
        group = [rec]
    sequences.append(_build_sequence(group))
    return sequences


def load_jsonl(path: str | Path) -> list[PoseSequence]:
    return parse_jsonl(Path(path).read_bytes())


def _frame_record(seq: PoseSequence, t: int) -> dict:
    landmarks = {}
    for i, joint in enumerate(seq.joints):
        x, y, z = seq.coords[t, i]
        landmarks[joint.key] = {
            "x": float(x),
            "y": float(y),
            "z": float(z),
            "v": float(seq.visibility[t, i]),
        }
    return {
        "source_id": seq.source_id,
        "label": seq.label.key if seq.label is not None else None,
        "frame_index": t,
        "fps": seq.fps,
        "landmarks": landmarks,
    }


def serialize_jsonl(sequences: Iterable[PoseSequence]) -> str:
    """Render sequences back to the JSONL wire format."""
    lines = []
    for seq in sequences:
        for t in range(seq.frame_count):
            lines.append(json.dumps(_frame_record(seq, t), separators=(",", ":")))
    return "\n".join(lines) + "\n"


def dump_jsonl(sequences: Iterable[PoseSequence], path: str | Path) -> None:
    Path(path).write_text(serialize_jsonl(sequences), encoding="utf-8")


def select_joints(seq: PoseSequence, mask: Iterable[JointId]) -> PoseSequence:
    """Reduce a sequence to the masked joints, in canonical order."""
    mask = frozenset(mask)
    if not mask:
        raise ValueError("joint mask must not be empty")
    if not mask <= ALL_12:
        raise ValueError("joint mask must be a subset of the 12 canonical joints")
    missing = mask - set(seq.joints)
    if missing:
        names = ", ".join(sorted(j.key for j in missing))
        raise MissingJointError(f"sequence '{seq.source_id}' lacks joints: {names}")
    keep = ordered_joints(mask)
    if keep == seq.joints:
        return seq
    idx = [seq.joints.index(j) for j in keep]
    return PoseSequence(
        keep,
        seq.coords[:, idx],
        seq.visibility[:, idx],
        seq.label,
        seq.source_id,
        seq.fps,
    )


def class_histogram(
    sequences: Iterable[PoseSequence],
) -> dict[ActivityClass, int]:
    """Count labeled sequences per class (unlabeled ones are skipped)."""
    counts = {c: 0 for c in ActivityClass}
    for seq in sequences:
        if seq.label is not None:
            counts[seq.label] += 1
    return counts


def resolve_mask(
    spec: str | Iterable[str] | Iterable[JointId],
) -> frozenset[JointId]:
    """Resolve a mask name ('all12', 'left6', ...) or explicit joint list."""
    if isinstance(spec, str):
        try:
            return JOINT_MASKS[spec]
        except KeyError:
            raise ValueError(
                f"unknown joint mask '{spec}' (expected one of {sorted(JOINT_MASKS)})"
            ) from None
    joints = []
    for item in spec:
        if isinstance(item, JointId):
            joints.append(item)
        elif isinstance(item, str) and item in _JOINT_BY_KEY:
            joints.append(_JOINT_BY_KEY[item])
        else:
            raise ValueError(f"unknown joint '{item}'")
    if not joints:
        raise ValueError("joint mask must not be empty")
    return frozenset(joints)
