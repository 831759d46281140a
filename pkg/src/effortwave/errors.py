"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: validation problems (anything deriving
from ValueError here) exit 2, I/O problems exit 3, numerical problems exit 4.
"""
from __future__ import annotations


class TraceError(ValueError):
    """Base class for landmark-trace problems."""


class TraceParseError(TraceError):
    """The trace file is not syntactically valid JSON or lacks the header."""


class TraceSchemaError(TraceError):
    """A frame violates the landmark schema (missing name, bad value)."""

    def __init__(self, message: str, landmark: str | None = None,
                 frame_index: int | None = None):
        super().__init__(message)
        self.landmark = landmark
        self.frame_index = frame_index


class TraceOrderingError(TraceError):
    """Timestamps are not strictly increasing."""

    def __init__(self, message: str, first_frame: int, second_frame: int):
        super().__init__(message)
        self.first_frame = first_frame
        self.second_frame = second_frame


class InsufficientFramesError(TraceError):
    """Too few frames for the requested operation."""


class ConfigError(ValueError):
    """Pipeline configuration file is missing fields or inconsistent."""


class ModelError(ValueError):
    """Body model definition violates its structural invariants."""


class NumericalError(ArithmeticError):
    """A stage produced non-finite values where finite ones are required."""


class StageError(RuntimeError):
    """Wraps any exception raised inside a named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
