"""End-to-end pipeline runs: classifier comparisons and keypoint ablations."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .estimators import ClassifierKind, HyperParams, TrainedModel, train
from .features import FeatureLayout, featurize_all
from .keypoints import (
    ActivityClass,
    JOINT_MASKS,
    JointId,
    PoseSequence,
    select_joints,
)
from .metrics import EvalReport, RunMeta, evaluate
from .rotation import PivotPolicy, augment_dataset
from .synth import SynthSpec, generate
from ._version import __version__  # noqa: F401  (re-exported for manifests)

ALL_KINDS: tuple[ClassifierKind, ...] = tuple(ClassifierKind)
TABLE4_MASKS: tuple[str, ...] = ("all12", "no_right_shoulder", "left6", "right6")


def run_pipeline(
    train_seqs: Sequence[PoseSequence],
    test_seqs: Sequence[PoseSequence],
    kind: ClassifierKind,
    augmented: bool,
    mask: Iterable[JointId] | str = "all12",
    hp: HyperParams | None = None,
    seed: int = 0,
    angles: Sequence[int] | None = None,
    pivot: PivotPolicy = PivotPolicy.HIP_MIDPOINT,
    frame_count: int = 50,
    standardize: bool | None = None,
) -> tuple[TrainedModel, EvalReport]:
    """Ingest -> (augment) -> featurize -> train -> evaluate for one kind."""
    mask_name = mask if isinstance(mask, str) else "custom"
    joints = JOINT_MASKS[mask] if isinstance(mask, str) else frozenset(mask)
    train_sel = [select_joints(s, joints) for s in train_seqs]
    test_sel = [select_joints(s, joints) for s in test_seqs]
    if augmented:
        train_sel = augment_dataset(train_sel, angles, pivot=pivot)
    layout = FeatureLayout.from_mask(joints, frame_count)
    train_vecs = featurize_all(train_sel, layout)
    test_vecs = featurize_all(test_sel, layout)
    model = train(kind, train_vecs, hp=hp, seed=seed, standardize=standardize)
    meta = RunMeta(kind=kind.value, augmented=augmented, mask=mask_name, seed=seed)
    report = evaluate(model, test_vecs, run_meta=meta)
    return model, report


def run_comparison(
    train_seqs: Sequence[PoseSequence],
    test_seqs: Sequence[PoseSequence],
    kinds: Sequence[ClassifierKind],
    augmented: bool,
    mask: Iterable[JointId] | str = "all12",
    hp: HyperParams | None = None,
    seed: int = 0,
    **pipeline_kwargs,
) -> list[EvalReport]:
    """One report per classifier kind under a single regime and mask."""
    reports = []
    for kind in kinds:
        _, report = run_pipeline(
            train_seqs,
            test_seqs,
            kind,
            augmented,
            mask=mask,
            hp=hp,
            seed=seed,
            **pipeline_kwargs,
        )
        reports.append(report)
    return reports


def run_table3(
    train_seqs: Sequence[PoseSequence],
    test_seqs: Sequence[PoseSequence],
    kinds: Sequence[ClassifierKind] = ALL_KINDS,
    hp: HyperParams | None = None,
    seed: int = 0,
    **pipeline_kwargs,
) -> list[EvalReport]:
    """The 12-row comparison: each kind without, then with augmentation."""
    reports = []
    for kind in kinds:
        for augmented in (False, True):
            _, report = run_pipeline(
                train_seqs, test_seqs, kind, augmented, hp=hp, seed=seed,
                **pipeline_kwargs,
            )
            reports.append(report)
    return reports


def run_table4(
    train_seqs: Sequence[PoseSequence],
    test_seqs: Sequence[PoseSequence],
    kinds: Sequence[ClassifierKind] = ALL_KINDS,
    masks: Sequence[str] = TABLE4_MASKS,
    hp: HyperParams | None = None,
    seed: int = 0,
    **pipeline_kwargs,
) -> list[EvalReport]:
    """The keypoint-subset ablation grid: kinds x regimes x masks."""
    reports = []
    for kind in kinds:
        for augmented in (False, True):
            for mask in masks:
                _, report = run_pipeline(
                    train_seqs, test_seqs, kind, augmented, mask=mask,
                    hp=hp, seed=seed, **pipeline_kwargs,
                )
                reports.append(report)
    return reports


TEST_YAW_CHOICES: tuple[float, ...] = (-45.0, -30.0, -15.0, 15.0, 30.0, 45.0)


def view_robustness_trial(
    seed: int,
    kind: ClassifierKind = ClassifierKind.SVM_SGD,
    hp: HyperParams | None = None,
    noise_std: float = 0.01,
    frames: int = 120,
    test_per_class: int = 5,
    angles: Sequence[int] | None = None,
) -> dict:
    """One-shot training at yaw 0 versus a rotated test set, both regimes.

    Returns accuracies with and without the rotation sweep, the desk-scale
    analog of the augmented-versus-baseline comparison.
    """
    root = np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF)
    train_ss, test_ss, yaw_ss = root.spawn(3)
    yaw_rng = np.random.Generator(np.random.PCG64(yaw_ss))

    train_children = train_ss.spawn(len(ActivityClass))
    train_seqs = [
        generate(
            SynthSpec(
                class_id=cls,
                camera_yaw_deg=0.0,
                frames=frames,
                noise_std=noise_std,
                seed=int(train_children[i].generate_state(1, np.uint64)[0]),
            )
        )
        for i, cls in enumerate(ActivityClass)
    ]

    test_children = test_ss.spawn(test_per_class * len(ActivityClass))
    test_seqs = []
    i = 0
    for cls in ActivityClass:
        for _ in range(test_per_class):
            yaw = TEST_YAW_CHOICES[yaw_rng.integers(len(TEST_YAW_CHOICES))]
            test_seqs.append(
                generate(
                    SynthSpec(
                        class_id=cls,
                        camera_yaw_deg=float(yaw),
                        frames=frames,
                        noise_std=noise_std,
                        seed=int(test_children[i].generate_state(1, np.uint64)[0]),
                    )
                )
            )
            i += 1

    accuracies = {}
    for augmented in (False, True):
        _, report = run_pipeline(
            train_seqs, test_seqs, kind, augmented, hp=hp, seed=seed, angles=angles
        )
        accuracies["augmented" if augmented else "baseline"] = report.accuracy
    accuracies["gap"] = accuracies["augmented"] - accuracies["baseline"]
    return accuracies
