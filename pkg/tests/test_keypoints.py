import json

import numpy as np
import pytest

from posekit.errors import (
    EmptyInputError,
    MissingJointError,
    ParseError,
    SchemaError,
)
from posekit.keypoints import (
    ALL_12,
    ActivityClass,
    CANONICAL_JOINTS,
    JOINT_MASKS,
    JointId,
    class_histogram,
    parse_jsonl,
    resolve_mask,
    select_joints,
    serialize_jsonl,
)

from conftest import frame_line, joint_record, make_sequence, simple_jsonl


def test_canonical_joint_order_is_fixed():
    keys = [j.key for j in CANONICAL_JOINTS]
    assert keys == [
        "left_shoulder",
        "right_shoulder",
        "left_elbow",
        "right_elbow",
        "left_wrist",
        "right_wrist",
        "left_hip",
        "right_hip",
        "left_knee",
        "right_knee",
        "left_ankle",
        "right_ankle",
    ]
    assert [c.key for c in ActivityClass] == [
        "angled_leg_press",
        "chin_up",
        "dumbbell_lunge",
        "hack_squat",
        "squat",
    ]


def test_parse_single_video_identity():
    seqs = parse_jsonl(simple_jsonl(n_frames=50))
    assert len(seqs) == 1
    seq = seqs[0]
    assert seq.frame_count == 50
    assert seq.joints == CANONICAL_JOINTS
    assert seq.label is ActivityClass.SQUAT
    assert seq.fps == 30.0
    assert [f.frame_index for f in seq.frames] == list(range(50))


def test_parse_table2_histogram():
    counts = {
        "angled_leg_press": 6,
        "chin_up": 5,
        "dumbbell_lunge": 6,
        "hack_squat": 4,
        "squat": 4,
    }
    lines = []
    v = 0
    for label, n in counts.items():
        for _ in range(n):
            for t in range(3):
                lines.append(frame_line(source_id=f"vid{v}", label=label, frame_index=t))
            v += 1
    text = "\n".join(lines)
    seqs = parse_jsonl(text)
    assert len(seqs) == 25
    histogram = {c.key: n for c, n in class_histogram(seqs).items()}
    assert histogram == counts
    # independent line scan over first-frame records
    scan = {c.key: 0 for c in ActivityClass}
    for line in text.splitlines():
        obj = json.loads(line)
        if obj["frame_index"] == 0:
            scan[obj["label"]] += 1
    assert scan == histogram


def test_extra_joints_are_dropped():
    text = simple_jsonl(extra_joints={"nose": joint_record(), "left_eye": joint_record()})
    seq = parse_jsonl(text)[0]
    assert seq.joints == CANONICAL_JOINTS


def test_fill_rule_copies_previous_frame():
    line0 = frame_line(frame_index=0)
    line1 = frame_line(frame_index=1, joints=[j for j in CANONICAL_JOINTS if j is not JointId.LEFT_ANKLE])
    seq = parse_jsonl(line0 + "\n" + line1)[0]
    i = seq.joints.index(JointId.LEFT_ANKLE)
    assert np.array_equal(seq.coords[1, i], seq.coords[0, i])
    assert seq.visibility[1, i] == 0.0
    assert seq.visibility[0, i] == 1.0


def test_fill_rule_borrows_future_frame_when_no_past():
    line0 = frame_line(frame_index=0, joints=[j for j in CANONICAL_JOINTS if j is not JointId.LEFT_ANKLE])
    line1 = frame_line(frame_index=1)
    seq = parse_jsonl(line0 + "\n" + line1)[0]
    i = seq.joints.index(JointId.LEFT_ANKLE)
    assert np.array_equal(seq.coords[0, i], seq.coords[1, i])
    assert seq.visibility[0, i] == 0.0


def test_joint_missing_everywhere_is_schema_error():
    joints = [j for j in CANONICAL_JOINTS if j is not JointId.LEFT_ANKLE]
    text = "\n".join(frame_line(frame_index=i, joints=joints) for i in range(3))
    with pytest.raises(SchemaError, match="left_ankle"):
        parse_jsonl(text)


def test_round_trip_is_fixed_point():
    text = simple_jsonl(n_frames=4) + simple_jsonl(
        n_frames=2, source_id="vid1", label="chin_up", fps=25.0
    )
    once = parse_jsonl(text)
    twice = parse_jsonl(serialize_jsonl(once))
    assert once == twice
    assert serialize_jsonl(once) == serialize_jsonl(twice)


def test_null_label_round_trips():
    seq = parse_jsonl(simple_jsonl(label=None))[0]
    assert seq.label is None
    assert parse_jsonl(serialize_jsonl([seq]))[0].label is None


def test_unknown_label_is_schema_error():
    with pytest.raises(SchemaError, match="deadlift"):
        parse_jsonl(simple_jsonl(label="deadlift"))


def test_empty_input_error():
    with pytest.raises(EmptyInputError):
        parse_jsonl("")
    with pytest.raises(EmptyInputError):
        parse_jsonl("\n  \n")


def test_malformed_line_reports_line_number():
    text = frame_line(frame_index=0) + "\n{not json"
    with pytest.raises(ParseError) as err:
        parse_jsonl(text)
    assert err.value.line_number == 2


@pytest.mark.parametrize(
    "mutation, error",
    [
        (lambda obj: obj.pop("source_id"), ParseError),
        (lambda obj: obj.update(frame_index=-1), ParseError),
        (lambda obj: obj.update(frame_index="0"), ParseError),
        (lambda obj: obj.update(fps="fast"), ParseError),
        (lambda obj: obj.update(landmarks=[]), ParseError),
        (lambda obj: obj["landmarks"].update(left_wrist={"x": 1}), ParseError),
        (
            lambda obj: obj["landmarks"].update(
                left_wrist={"x": float("nan"), "y": 0, "z": 0, "v": 1}
            ),
            SchemaError,
        ),
        (
            lambda obj: obj["landmarks"].update(
                left_wrist={"x": 0, "y": 0, "z": 0, "v": 1.5}
            ),
            SchemaError,
        ),
    ],
)
def test_bad_records_raise(mutation, error):
    obj = json.loads(frame_line(frame_index=0))
    mutation(obj)
    with pytest.raises(error):
        parse_jsonl(json.dumps(obj))


def test_noncontiguous_frame_index_is_schema_error():
    text = frame_line(frame_index=0) + "\n" + frame_line(frame_index=2)
    with pytest.raises(SchemaError, match="contiguous"):
        parse_jsonl(text)


def test_conflicting_label_and_fps_are_schema_errors():
    with pytest.raises(SchemaError, match="label"):
        parse_jsonl(frame_line(frame_index=0) + "\n" + frame_line(frame_index=1, label="chin_up"))
    with pytest.raises(SchemaError, match="fps"):
        parse_jsonl(frame_line(frame_index=0) + "\n" + frame_line(frame_index=1, fps=60.0))


def test_reappearing_source_id_is_parse_error():
    text = "\n".join(
        [
            frame_line(source_id="a", frame_index=0),
            frame_line(source_id="b", frame_index=0),
            frame_line(source_id="a", frame_index=0),
        ]
    )
    with pytest.raises(ParseError, match="non-contiguously"):
        parse_jsonl(text)


def test_select_joints_masks():
    seq = make_sequence()
    assert select_joints(seq, ALL_12) == seq

    eleven = select_joints(seq, JOINT_MASKS["no_right_shoulder"])
    assert len(eleven.joints) == 11
    assert JointId.RIGHT_SHOULDER not in eleven.joints

    left = select_joints(seq, JOINT_MASKS["left6"])
    assert [j.key for j in left.joints] == [
        "left_shoulder",
        "left_elbow",
        "left_wrist",
        "left_hip",
        "left_knee",
        "left_ankle",
    ]


def test_select_joints_is_idempotent():
    seq = make_sequence()
    mask = JOINT_MASKS["right6"]
    once = select_joints(seq, mask)
    assert select_joints(once, mask) == once


def test_select_joints_errors():
    seq = make_sequence()
    with pytest.raises(ValueError):
        select_joints(seq, set())
    reduced = select_joints(seq, JOINT_MASKS["left6"])
    with pytest.raises(MissingJointError):
        select_joints(reduced, JOINT_MASKS["right6"])


def test_resolve_mask():
    assert resolve_mask("all12") == ALL_12
    assert resolve_mask(["left_hip", "right_hip"]) == {
        JointId.LEFT_HIP,
        JointId.RIGHT_HIP,
    }
    with pytest.raises(ValueError):
        resolve_mask("all13")
    with pytest.raises(ValueError):
        resolve_mask(["toe"])


def test_frame_landmark_views():
    seq = make_sequence(n_frames=2)
    frame = seq.frames[1]
    landmarks = frame.landmarks
    assert set(landmarks) == set(CANONICAL_JOINTS)
    lm = frame.landmark(JointId.LEFT_HIP)
    i = seq.joints.index(JointId.LEFT_HIP)
    assert (lm.x, lm.y, lm.z) == tuple(seq.coords[1, i])
