import json

import numpy as np
import pytest

from posekit.keypoints import (
    ActivityClass,
    CANONICAL_JOINTS,
    JointId,
    PoseSequence,
)


def joint_record(x=0.1, y=0.2, z=0.3, v=1.0):
    return {"x": x, "y": y, "z": z, "v": v}


def frame_line(
    source_id="vid0",
    label="squat",
    frame_index=0,
    fps=30.0,
    joints=None,
    extra_joints=None,
):
    landmarks = {}
    for j in joints if joints is not None else CANONICAL_JOINTS:
        key = j.key if isinstance(j, JointId) else j
        landmarks[key] = joint_record(x=0.1 + 0.01 * frame_index)
    for key, rec in (extra_joints or {}).items():
        landmarks[key] = rec
    return json.dumps(
        {
            "source_id": source_id,
            "label": label,
            "frame_index": frame_index,
            "fps": fps,
            "landmarks": landmarks,
        }
    )


def simple_jsonl(n_frames=3, **kwargs):
    return "\n".join(frame_line(frame_index=i, **kwargs) for i in range(n_frames)) + "\n"


def make_sequence(
    n_frames=5,
    label=ActivityClass.SQUAT,
    source_id="seq0",
    fps=30.0,
    seed=0,
    joints=CANONICAL_JOINTS,
):
    rng = np.random.default_rng(seed)
    coords = rng.uniform(-0.5, 0.5, size=(n_frames, len(joints), 3))
    visibility = np.ones((n_frames, len(joints)))
    return PoseSequence(tuple(joints), coords, visibility, label, source_id, fps)


@pytest.fixture
def squat_sequence():
    return make_sequence()
