"""Landmark-trace data model: JSON parsing, validation, resampling.

Trace files are self-describing JSON::

    {
      "version": 1,
      "unit_scale": <meters per trace unit>,
      "up_axis": "+y" | "-y" | "+z" | "-z",
      "frame_rate_hint": <Hz or null>,
      "frames": [
        {"t": <seconds>,
         "landmarks": {"<name>": {"x": f, "y": f, "z": f, "visibility": f}, ...}},
        ...
      ]
    }

The header makes units and gravity direction explicit so that downstream
dynamics never has to guess. Parsing preserves the file's coordinate
convention; conversion to the internal +y-up metric frame happens when
segment centers of gravity are computed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    InsufficientFramesError,
    TraceOrderingError,
    TraceParseError,
    TraceSchemaError,
)
from .landmarks import MODEL_OPTIONAL_LANDMARKS, MODEL_REQUIRED_LANDMARKS

TRACE_VERSION = 1
UP_AXES = ("+y", "-y", "+z", "-z")

# Relative timestamp jitter below which a trace counts as uniformly sampled
# and resampling may be skipped.
UNIFORM_JITTER_TOLERANCE = 0.01


@dataclass
class LandmarkFrame:
    """One video frame: named landmark positions in trace units."""

    timestamp: float
    positions: dict[str, np.ndarray]
    visibility: dict[str, float] = field(default_factory=dict)


@dataclass
class LandmarkTrace:
    """Array-backed sequence of landmark frames plus the file header.

    ``positions`` has shape (n_frames, n_landmarks, 3) ordered like
    ``landmark_names``; ``visibility`` has shape (n_frames, n_landmarks).
    Positions stay in the file's units and axis convention.
    """

    timestamps: np.ndarray
    landmark_names: list[str]
    positions: np.ndarray
    visibility: np.ndarray
    unit_scale: float
    up_axis: str = "+y"
    frame_rate_hint: float | None = None

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float)
        self.visibility = np.asarray(self.visibility, dtype=float)
        if self.unit_scale <= 0:
            raise TraceSchemaError(f"unit_scale must be > 0, got {self.unit_scale}")
        if self.up_axis not in UP_AXES:
            raise TraceSchemaError(f"up_axis must be one of {UP_AXES}, got {self.up_axis!r}")
        bad = _first_nonincreasing(self.timestamps)
        if bad is not None:
            raise TraceOrderingError(
                f"timestamps not strictly increasing between frames {bad} and {bad + 1} "
                f"({self.timestamps[bad]!r} -> {self.timestamps[bad + 1]!r})",
                first_frame=bad, second_frame=bad + 1)

    @property
    def n_frames(self) -> int:
        return len(self.timestamps)

    @property
    def duration(self) -> float:
        return float(self.timestamps[-1] - self.timestamps[0])

    def mean_interval(self) -> float:
        if self.n_frames < 2:
            raise InsufficientFramesError("need at least 2 frames for a sampling interval")
        return float(np.mean(np.diff(self.timestamps)))

    def timestamp_jitter(self) -> float:
        """Max relative deviation of frame intervals from their mean."""
        dt = np.diff(self.timestamps)
        mean = np.mean(dt)
        return float(np.max(np.abs(dt - mean)) / mean)

    def index(self, name: str) -> int:
        try:
            return self.landmark_names.index(name)
        except ValueError:
            raise TraceSchemaError(f"trace has no landmark {name!r}", landmark=name) from None

    def landmark(self, name: str) -> np.ndarray:
        """(n_frames, 3) view of one landmark's positions."""
        return self.positions[:, self.index(name), :]

    def frame(self, i: int) -> LandmarkFrame:
        return LandmarkFrame(
            timestamp=float(self.timestamps[i]),
            positions={name: self.positions[i, j].copy()
                       for j, name in enumerate(self.landmark_names)},
            visibility={name: float(self.visibility[i, j])
                        for j, name in enumerate(self.landmark_names)},
        )

    def equals(self, other: "LandmarkTrace") -> bool:
        return (
            self.landmark_names == other.landmark_names
            and self.unit_scale == other.unit_scale
            and self.up_axis == other.up_axis
            and self.frame_rate_hint == other.frame_rate_hint
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.visibility, other.visibility)
        )


def _first_nonincreasing(timestamps: np.ndarray) -> int | None:
    if len(timestamps) < 2:
        return None
    diffs = np.diff(timestamps)
    bad = np.nonzero(diffs <= 0)[0]
    return int(bad[0]) if len(bad) else None


def default_required_landmarks() -> tuple[str, ...]:
    return MODEL_REQUIRED_LANDMARKS


def parse_landmark_trace(path: str | Path,
                         required_landmarks: tuple[str, ...] | None = None,
                         ) -> LandmarkTrace:
    """Parse and validate a landmark trace file.

    Parameters
    ----------
    path : path to the JSON trace file.
    required_landmarks : landmark names every frame must carry. Defaults to
        the set consumed by the default body model.

    Raises
    ------
    TraceParseError : malformed JSON or missing/invalid header fields.
    TraceSchemaError : a frame is missing a required landmark, carries a
        non-finite coordinate, or drops a landmark present in frame 0.
    TraceOrderingError : timestamps are not strictly increasing.
    """
    if required_landmarks is None:
        required_landmarks = default_required_landmarks()

    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"{path}: not valid JSON: {exc}") from exc

    if not isinstance(raw, dict):
        raise TraceParseError(f"{path}: top level must be an object")
    version = raw.get("version")
    if version != TRACE_VERSION:
        raise TraceParseError(f"{path}: unsupported trace version {version!r}")
    for key in ("unit_scale", "up_axis", "frames"):
        if key not in raw:
            raise TraceParseError(f"{path}: missing header field {key!r}")

    unit_scale = raw["unit_scale"]
    if not isinstance(unit_scale, (int, float)) or not math.isfinite(unit_scale) or unit_scale <= 0:
        raise TraceSchemaError(f"unit_scale must be a positive finite number, got {unit_scale!r}")
    up_axis = raw["up_axis"]
    if up_axis not in UP_AXES:
        raise TraceSchemaError(f"up_axis must be one of {UP_AXES}, got {up_axis!r}")
    rate_hint = raw.get("frame_rate_hint")
    if rate_hint is not None and (not isinstance(rate_hint, (int, float)) or rate_hint <= 0):
        raise TraceSchemaError(f"frame_rate_hint must be positive or null, got {rate_hint!r}")

    frames = raw["frames"]
    if not isinstance(frames, list) or not frames:
        raise TraceParseError(f"{path}: 'frames' must be a non-empty list")

    # Landmark ordering is fixed by frame 0; later frames must carry the
    # same set so the trace maps onto rectangular arrays.
    first = frames[0].get("landmarks")
    if not isinstance(first, dict):
        raise TraceParseError(f"{path}: frame 0 has no 'landmarks' object")
    names = list(first.keys())
    name_set = set(names)
    for req in required_landmarks:
        if req not in name_set:
            raise TraceSchemaError(
                f"required landmark {req!r} missing in frame 0",
                landmark=req, frame_index=0)

    n, m = len(frames), len(names)
    timestamps = np.empty(n)
    positions = np.empty((n, m, 3))
    visibility = np.ones((n, m))

    for i, fr in enumerate(frames):
        if not isinstance(fr, dict) or "t" not in fr or "landmarks" not in fr:
            raise TraceParseError(f"{path}: frame {i} must have 't' and 'landmarks'")
        t = fr["t"]
        if not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
            raise TraceSchemaError(f"frame {i} timestamp must be a non-negative finite "
                                   f"number, got {t!r}", frame_index=i)
        timestamps[i] = t
        lms = fr["landmarks"]
        for j, name in enumerate(names):
            if name not in lms:
                raise TraceSchemaError(f"landmark {name!r} missing in frame {i}",
                                       landmark=name, frame_index=i)
            lm = lms[name]
            try:
                x, y, z = lm["x"], lm["y"], lm["z"]
            except (TypeError, KeyError) as exc:
                raise TraceSchemaError(f"landmark {name!r} in frame {i} must have x, y, z",
                                       landmark=name, frame_index=i) from exc
            if not all(isinstance(c, (int, float)) and math.isfinite(c) for c in (x, y, z)):
                raise TraceSchemaError(
                    f"landmark {name!r} in frame {i} has a non-finite coordinate",
                    landmark=name, frame_index=i)
            positions[i, j] = (x, y, z)
            vis = lm.get("visibility", 1.0)
            if not isinstance(vis, (int, float)) or not 0.0 <= vis <= 1.0:
                raise TraceSchemaError(
                    f"landmark {name!r} in frame {i} visibility must be in [0, 1], got {vis!r}",
                    landmark=name, frame_index=i)
            visibility[i, j] = vis

    return LandmarkTrace(
        timestamps=timestamps,
        landmark_names=names,
        positions=positions,
        visibility=visibility,
        unit_scale=float(unit_scale),
        up_axis=up_axis,
        frame_rate_hint=None if rate_hint is None else float(rate_hint),
    )


def serialize_landmark_trace(trace: LandmarkTrace, path: str | Path) -> None:
    """Write a trace back to the JSON schema (inverse of parse)."""
    frames = []
    for i in range(trace.n_frames):
        lms = {}
        for j, name in enumerate(trace.landmark_names):
            x, y, z = trace.positions[i, j]
            lms[name] = {"x": float(x), "y": float(y), "z": float(z),
                         "visibility": float(trace.visibility[i, j])}
        frames.append({"t": float(trace.timestamps[i]), "landmarks": lms})
    doc = {
        "version": TRACE_VERSION,
        "unit_scale": trace.unit_scale,
        "up_axis": trace.up_axis,
        "frame_rate_hint": trace.frame_rate_hint,
        "frames": frames,
    }
    Path(path).write_text(json.dumps(doc))


def resample_uniform(trace: LandmarkTrace, target_rate: float) -> LandmarkTrace:
    """Resample a trace onto the uniform grid t0 + k / target_rate.

    Positions (and visibility) are linearly interpolated per component.
    The output covers the input span [t0, tN]. A trace already on the target
    grid is returned unchanged (positions bitwise equal).
    """
    if target_rate <= 0:
        raise ValueError(f"target_rate must be > 0, got {target_rate}")
    if trace.n_frames < 2:
        raise InsufficientFramesError("resampling needs at least 2 frames")

    t0 = trace.timestamps[0]
    span = trace.timestamps[-1] - t0
    n_out = int(math.floor(span * target_rate + 1e-9)) + 1
    new_t = t0 + np.arange(n_out) / target_rate

    if n_out == trace.n_frames and np.max(np.abs(new_t - trace.timestamps)) <= 1e-12 * max(span, 1.0):
        return LandmarkTrace(
            timestamps=trace.timestamps.copy(),
            landmark_names=list(trace.landmark_names),
            positions=trace.positions.copy(),
            visibility=trace.visibility.copy(),
            unit_scale=trace.unit_scale,
            up_axis=trace.up_axis,
            frame_rate_hint=float(target_rate),
        )

    n, m = trace.positions.shape[:2]
    flat = trace.positions.reshape(n, m * 3)
    out = np.empty((n_out, m * 3))
    for col in range(m * 3):
        out[:, col] = np.interp(new_t, trace.timestamps, flat[:, col])
    vis = np.empty((n_out, m))
    for col in range(m):
        vis[:, col] = np.interp(new_t, trace.timestamps, trace.visibility[:, col])

    return LandmarkTrace(
        timestamps=new_t,
        landmark_names=list(trace.landmark_names),
        positions=out.reshape(n_out, m, 3),
        visibility=vis,
        unit_scale=trace.unit_scale,
        up_axis=trace.up_axis,
        frame_rate_hint=float(target_rate),
    )


def to_y_up(points: np.ndarray, up_axis: str) -> np.ndarray:
    """Rotate points so the declared up axis maps onto +y.

    Proper rotations only (about the x axis), so handedness is preserved:
    "-y" is the 180-degree flip, "+z"/"-z" are quarter turns.
    """
    p = np.asarray(points, dtype=float)
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    if up_axis == "+y":
        return p.copy()
    if up_axis == "-y":
        return np.stack([x, -y, -z], axis=-1)
    if up_axis == "+z":
        return np.stack([x, z, -y], axis=-1)
    if up_axis == "-z":
        return np.stack([x, -z, y], axis=-1)
    raise TraceSchemaError(f"up_axis must be one of {UP_AXES}, got {up_axis!r}")
