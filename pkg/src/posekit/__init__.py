"""posekit: view-robust gym-exercise classification from pose keypoints.

The pipeline ingests per-frame keypoint JSONL, simulates camera viewpoints
by rotating the skeleton about the vertical axis, flattens the first 50
frames of x/y trajectories into fixed-layout vectors, and classifies them
with a from-scratch six-classifier suite.
"""

from ._version import __version__
from .errors import (
    ConfigError,
    EmptyInputError,
    InvalidTrainingSetError,
    ManifestMismatchError,
    MissingJointError,
    MissingPivotError,
    ModelFormatError,
    ParseError,
    PoseKitError,
    SchemaError,
    UnsupportedVersionError,
)
from .keypoints import (
    ActivityClass,
    CANONICAL_JOINTS,
    JOINT_MASKS,
    JointId,
    Landmark,
    PoseFrame,
    PoseSequence,
    class_histogram,
    dump_jsonl,
    load_jsonl,
    parse_jsonl,
    resolve_mask,
    select_joints,
    serialize_jsonl,
)
from .rotation import (
    Axis,
    DEFAULT_ANGLES,
    PivotPolicy,
    RotationSpec,
    augment_dataset,
    augment_sequence,
    rotate_coords,
    rotate_frame,
    rotate_point,
    rotate_sequence,
    rotation_matrix,
)
from .features import (
    FeatureLayout,
    FeatureScaler,
    FeatureVector,
    export_csv,
    featurize,
    featurize_all,
    standardize_apply,
    standardize_fit,
    to_matrix,
)
from .estimators import (
    ClassifierKind,
    HyperParams,
    TrainedModel,
    load_model,
    predict,
    save_model,
    train,
)
from .metrics import (
    EvalReport,
    RunMeta,
    confusion_matrix,
    evaluate,
    report_from_matrix,
)
from .synth import SynthSpec, TEMPLATES, generate, generate_dataset
from .experiments import (
    run_comparison,
    run_pipeline,
    run_table3,
    run_table4,
    view_robustness_trial,
)

__all__ = [name for name in dir() if not name.startswith("_")]
