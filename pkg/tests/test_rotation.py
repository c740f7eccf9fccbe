import math

import numpy as np
import pytest

from posekit.errors import MissingPivotError
from posekit.keypoints import CANONICAL_JOINTS, JOINT_MASKS, JointId, PoseSequence, select_joints
from posekit.rotation import (
    Axis,
    DEFAULT_ANGLES,
    PivotPolicy,
    RotationSpec,
    augment_dataset,
    augment_sequence,
    rotate_frame,
    rotate_point,
    rotate_sequence,
    rotation_matrix,
)

from conftest import make_sequence


def test_rotate_point_identity_is_exact():
    p = (0.3, 0.5, 0.1)
    assert rotate_point(p, 0) == p


def test_rotate_point_quarter_turn():
    x, y, z = rotate_point((1.0, 2.0, 3.0), 90)
    assert x == pytest.approx(3.0, abs=1e-12)
    assert y == 2.0
    assert z == pytest.approx(-1.0, abs=1e-12)


def test_rotate_point_inverse_composition():
    p = (0.42, -0.1, 0.7)
    q = rotate_point(rotate_point(p, 37), -37)
    assert np.allclose(q, p, atol=1e-12)


def test_rotation_matrix_matches_rotate_point():
    rng = np.random.default_rng(11)
    for theta in rng.uniform(-180, 180, size=20):
        p = rng.normal(size=3)
        assert np.allclose(rotation_matrix(theta) @ p, rotate_point(p, theta), atol=1e-12)


def test_orthogonality_and_determinant():
    rng = np.random.default_rng(5)
    for axis in Axis:
        for theta in rng.uniform(-360, 360, size=50):
            R = rotation_matrix(theta, axis)
            assert np.abs(R @ R.T - np.eye(3)).max() < 1e-12
            assert abs(np.linalg.det(R) - 1.0) < 1e-12


def test_group_law_and_norm_preservation():
    rng = np.random.default_rng(7)
    p = rng.normal(size=(500, 3))
    a, b = 123.4, -77.9
    left = rotate_point_matrixwise(rotate_point_matrixwise(p, a), b)
    right = rotate_point_matrixwise(p, a + b)
    assert np.abs(left - right).max() < 1e-9
    assert np.abs(
        np.linalg.norm(left, axis=1) - np.linalg.norm(p, axis=1)
    ).max() < 1e-9


def rotate_point_matrixwise(p, theta):
    return np.asarray(p) @ rotation_matrix(theta).T


def test_y_component_never_changes():
    rng = np.random.default_rng(3)
    p = rng.normal(size=(200, 3))
    for theta in (-180, -33, 12, 90, 179):
        rotated = np.array([rotate_point(row, theta) for row in p])
        assert np.array_equal(rotated[:, 1], p[:, 1])


def test_rotate_frame_zero_is_identity():
    frame = make_sequence(n_frames=1).frames[0]
    assert rotate_frame(frame, RotationSpec(0)) == frame


def test_rotate_frame_fixed_points_on_pivot_axis():
    coords = np.zeros((12, 3))
    coords[:, 0] = 0.37  # every landmark shares x
    coords[:, 1] = np.linspace(0, 1, 12)  # distinct heights
    coords[:, 2] = -0.12  # every landmark shares z
    frame = make_sequence(n_frames=1).frames[0]
    frame = type(frame)(frame.joints, coords, frame.visibility, 0)
    for theta in (-180, -45, 30, 179):
        rotated = rotate_frame(frame, RotationSpec(theta))
        assert np.array_equal(rotated.coords, frame.coords)


def test_rotate_frame_half_turn_mirrors_through_pivot():
    frame = make_sequence(n_frames=1, seed=2).frames[0]
    li = frame.joints.index(JointId.LEFT_HIP)
    ri = frame.joints.index(JointId.RIGHT_HIP)
    cx = 0.5 * (frame.coords[li, 0] + frame.coords[ri, 0])
    cz = 0.5 * (frame.coords[li, 2] + frame.coords[ri, 2])
    rotated = rotate_frame(frame, RotationSpec(-180))
    expected_x = 2 * cx - frame.coords[:, 0]
    expected_z = 2 * cz - frame.coords[:, 2]
    assert np.abs(rotated.coords[:, 0] - expected_x).max() < 1e-9
    assert np.abs(rotated.coords[:, 2] - expected_z).max() < 1e-9
    assert np.array_equal(rotated.coords[:, 1], frame.coords[:, 1])
    assert np.array_equal(rotated.visibility, frame.visibility)


def test_pairwise_distances_preserved_under_both_pivots():
    seq = make_sequence(n_frames=6, seed=9)
    original = _pairwise(seq)
    for pivot in PivotPolicy:
        for theta in (-170, -45, 7, 120):
            rotated = rotate_sequence(seq, RotationSpec(theta, pivot_policy=pivot))
            assert np.abs(_pairwise(rotated) - original).max() < 1e-9


def _pairwise(seq):
    diff = seq.coords[:, :, np.newaxis, :] - seq.coords[:, np.newaxis, :, :]
    return np.linalg.norm(diff, axis=-1)


def test_rotate_frame_requires_hips_for_hip_pivot():
    seq = select_joints(make_sequence(), JOINT_MASKS["left6"])
    with pytest.raises(MissingPivotError):
        rotate_frame(seq.frames[0], RotationSpec(30))
    # origin pivot works without hips
    rotate_frame(seq.frames[0], RotationSpec(30, pivot_policy=PivotPolicy.ORIGIN))


def test_augment_counts():
    seq = make_sequence()
    out = augment_sequence(seq)
    assert len(out) == 360
    assert len(DEFAULT_ANGLES) == 360
    many = augment_dataset([make_sequence(source_id=f"s{i}") for i in range(5)])
    assert len(many) == 1800


def test_augment_zero_angle_is_the_original():
    seq = make_sequence()
    out = augment_sequence(seq, angles=[0])
    assert out == [seq]


def test_augment_tags_source_ids_and_preserves_label():
    seq = make_sequence(source_id="clip")
    out = augment_sequence(seq, angles=[-30, 0, 45])
    assert [s.source_id for s in out] == ["clip#rot-30", "clip", "clip#rot45"]
    assert all(s.label == seq.label for s in out)
    assert all(s.frame_count == seq.frame_count for s in out)


def test_augment_rejects_bad_angles():
    seq = make_sequence()
    with pytest.raises(ValueError):
        augment_sequence(seq, angles=[])
    with pytest.raises(ValueError):
        augment_sequence(seq, angles=[180])
    with pytest.raises(ValueError):
        augment_sequence(seq, angles=[12.5])


def test_rotation_spec_validation():
    with pytest.raises(ValueError):
        RotationSpec(-181)
    with pytest.raises(ValueError):
        RotationSpec(1.5)
    spec = RotationSpec(179, axis=Axis.PITCH, pivot_policy=PivotPolicy.ORIGIN)
    assert spec.axis is Axis.PITCH


def test_pitch_rotation_leaves_x_unchanged():
    seq = make_sequence(seed=4)
    rotated = rotate_sequence(
        seq, RotationSpec(40, axis=Axis.PITCH, pivot_policy=PivotPolicy.ORIGIN)
    )
    assert np.array_equal(rotated.coords[..., 0], seq.coords[..., 0])


def test_rotate_sequence_matches_per_frame_rotation():
    seq = make_sequence(n_frames=4, seed=12)
    spec = RotationSpec(77)
    whole = rotate_sequence(seq, spec)
    for t, frame in enumerate(seq.frames):
        single = rotate_frame(frame, spec)
        assert np.abs(whole.coords[t] - single.coords).max() < 1e-12
