"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class PoseKitError(Exception):
    """Base class for all posekit-specific errors."""


class ParseError(PoseKitError):
    """A line of a keypoint file is structurally malformed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SchemaError(PoseKitError):
    """Well-formed input that violates the keypoint schema semantics."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyInputError(PoseKitError):
    """Keypoint input contained no frame records."""


class MissingPivotError(PoseKitError):
    """Hip-midpoint rotation requested on a frame without both hip joints."""


class MissingJointError(PoseKitError):
    """An operation required a joint the sequence does not carry."""


class InvalidTrainingSetError(PoseKitError):
    """Training data does not cover every activity class."""


class ConfigError(PoseKitError):
    """Run configuration is missing, malformed, or inconsistent."""


class ModelFormatError(PoseKitError):
    """Serialized model payload cannot be decoded."""


class UnsupportedVersionError(ModelFormatError):
    """Serialized model carries a version this build does not read."""


class ManifestMismatchError(PoseKitError):
    """Run directories with different test sets cannot be merged."""
