"""Declarative run configuration for the command-line pipeline."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .estimators import ClassifierKind, HyperParams
from .keypoints import JOINT_MASKS, JointId, resolve_mask
from .rotation import DEFAULT_ANGLES, PivotPolicy

SEED_ENV_VAR = "POSEKIT_SEED"


def parse_angles(spec) -> tuple[int, ...]:
    """Accept 'a..b', 'a..b:step', a comma list, or a JSON list of ints."""
    if isinstance(spec, (list, tuple)):
        try:
            angles = tuple(int(a) for a in spec)
        except (TypeError, ValueError):
            raise ConfigError(f"angles list must contain integers: {spec!r}") from None
    elif isinstance(spec, str):
        text = spec.strip()
        try:
            if ".." in text:
                range_part, _, step_part = text.partition(":")
                start_s, _, stop_s = range_part.partition("..")
                step = int(step_part) if step_part else 1
                if step < 1:
                    raise ValueError
                angles = tuple(range(int(start_s), int(stop_s) + 1, step))
            else:
                angles = tuple(int(p) for p in text.split(",") if p.strip())
        except ValueError:
            raise ConfigError(f"cannot parse angle spec {text!r}") from None
    else:
        raise ConfigError(f"cannot parse angle spec {spec!r}")
    if not angles:
        raise ConfigError("angle spec resolves to an empty set")
    for a in angles:
        if not -180 <= a <= 179:
            raise ConfigError(f"angle {a} outside [-180, 179]")
    return angles


def resolve_seed(cli_seed: int | None, config_seed: int | None) -> int:
    """Seed priority: CLI flag, then config field, then POSEKIT_SEED, then 0."""
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    return 0


@dataclass
class RunConfig:
    train_path: Path
    test_path: Path
    output_dir: Path
    augment: bool | str = False  # True, False, or "both"
    angles: tuple[int, ...] = DEFAULT_ANGLES
    pivot: PivotPolicy = PivotPolicy.HIP_MIDPOINT
    joints: frozenset[JointId] = field(default_factory=lambda: JOINT_MASKS["all12"])
    mask_name: str = "all12"
    frame_count: int = 50
    classifiers: tuple[ClassifierKind, ...] = (ClassifierKind.SVM_SGD,)
    hyperparams: HyperParams = field(default_factory=HyperParams)
    seed: int = 0
    standardize: bool | None = None  # None = per-kind default

    def to_dict(self) -> dict:
        return {
            "train_path": str(self.train_path),
            "test_path": str(self.test_path),
            "output_dir": str(self.output_dir),
            "augment": self.augment,
            "angles": list(self.angles),
            "pivot": self.pivot.value,
            "joints": sorted(j.key for j in self.joints),
            "mask_name": self.mask_name,
            "frame_count": self.frame_count,
            "classifiers": [k.value for k in self.classifiers],
            "hyperparams": self.hyperparams.to_dict(),
            "seed": self.seed,
            "standardize": self.standardize,
        }


_KNOWN_FIELDS = {
    "train_path",
    "test_path",
    "output_dir",
    "augment",
    "angles",
    "pivot",
    "joints",
    "frame_count",
    "classifiers",
    "hyperparams",
    "seed",
    "standardize",
}


def config_from_dict(raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a raw config document; CLI overrides win over file fields."""
    if not isinstance(raw, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = set(raw) - _KNOWN_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    merged = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    missing = [k for k in ("train_path", "test_path", "output_dir") if not merged.get(k)]
    if missing:
        raise ConfigError(f"missing required config fields: {missing}")

    train_path = Path(merged["train_path"])
    test_path = Path(merged["test_path"])
    for name, p in (("train_path", train_path), ("test_path", test_path)):
        if not p.is_file():
            raise ConfigError(f"{name} does not exist: {p}")

    augment = merged.get("augment", False)
    if not isinstance(augment, bool) and augment != "both":
        raise ConfigError("'augment' must be true, false, or \"both\"")

    angles = (
        parse_angles(merged["angles"]) if "angles" in merged else DEFAULT_ANGLES
    )

    pivot_raw = merged.get("pivot", PivotPolicy.HIP_MIDPOINT.value)
    try:
        pivot = PivotPolicy(pivot_raw)
    except ValueError:
        raise ConfigError(f"unknown pivot policy {pivot_raw!r}") from None

    joints_raw = merged.get("joints", "all12")
    try:
        joints = resolve_mask(joints_raw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    mask_name = joints_raw if isinstance(joints_raw, str) else "custom"

    frame_count = merged.get("frame_count", 50)
    if not isinstance(frame_count, int) or isinstance(frame_count, bool) or frame_count < 1:
        raise ConfigError("'frame_count' must be a positive integer")

    kinds_raw = merged.get("classifiers", ["svm_sgd"])
    if isinstance(kinds_raw, str):
        kinds_raw = [kinds_raw]
    if not isinstance(kinds_raw, (list, tuple)) or not kinds_raw:
        raise ConfigError("'classifiers' must be a non-empty list")
    try:
        classifiers = tuple(ClassifierKind(k) for k in kinds_raw)
    except ValueError as exc:
        raise ConfigError(f"unknown classifier: {exc}") from None

    hp_raw = merged.get("hyperparams", {})
    if not isinstance(hp_raw, dict):
        raise ConfigError("'hyperparams' must be an object")
    try:
        hyperparams = HyperParams.from_dict(hp_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid hyperparams: {exc}") from None

    seed = merged.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("'seed' must be an integer")

    standardize = merged.get("standardize")
    if isinstance(standardize, str):
        if standardize == "auto":
            standardize = None
        else:
            raise ConfigError("'standardize' must be true, false, or \"auto\"")
    if standardize is not None and not isinstance(standardize, bool):
        raise ConfigError("'standardize' must be true, false, or \"auto\"")

    return RunConfig(
        train_path=train_path,
        test_path=test_path,
        output_dir=Path(merged["output_dir"]),
        augment=augment,
        angles=angles,
        pivot=pivot,
        joints=joints,
        mask_name=mask_name,
        frame_count=frame_count,
        classifiers=classifiers,
        hyperparams=hyperparams,
        seed=resolve_seed(None, seed),
        standardize=standardize,
    )


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(raw, overrides)
