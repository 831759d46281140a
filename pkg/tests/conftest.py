"""Shared fixtures and helpers for the test suite."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from effortwave.landmarks import POSE_LANDMARKS
from effortwave.trace_io import LandmarkTrace

FIXTURES = Path(__file__).parent / "fixtures"

# Standing pose in meters, +y up; covers everything the default model needs.
STANDING_POSE = {
    "left_ear": (0.05, 1.62, 0.02), "right_ear": (-0.05, 1.62, 0.02),
    "left_shoulder": (0.18, 1.45, 0.0), "right_shoulder": (-0.18, 1.45, 0.0),
    "left_elbow": (0.25, 1.18, 0.02), "right_elbow": (-0.25, 1.18, 0.02),
    "left_wrist": (0.27, 0.93, 0.05), "right_wrist": (-0.27, 0.93, 0.05),
    "left_index": (0.28, 0.84, 0.07), "right_index": (-0.28, 0.84, 0.07),
    "left_hip": (0.10, 0.92, 0.0), "right_hip": (-0.10, 0.92, 0.0),
    "left_knee": (0.11, 0.50, 0.01), "right_knee": (-0.11, 0.50, 0.01),
    "left_ankle": (0.12, 0.09, 0.0), "right_ankle": (-0.12, 0.09, 0.0),
    "left_heel": (0.12, 0.03, -0.03), "right_heel": (-0.12, 0.03, -0.03),
    "left_foot_index": (0.13, 0.02, 0.12), "right_foot_index": (-0.13, 0.02, 0.12),
}


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def make_trace(pose: dict[str, tuple[float, float, float]],
               n_frames: int = 1, rate: float = 30.0,
               offset_fn=None, unit_scale: float = 1.0,
               up_axis: str = "+y") -> LandmarkTrace:
    """Build a trace that applies offset_fn(t) -> (dx, dy, dz) to a base pose."""
    names = list(pose.keys())
    timestamps = np.arange(n_frames) / rate
    positions = np.empty((n_frames, len(names), 3))
    for i, t in enumerate(timestamps):
        d = np.asarray(offset_fn(t), dtype=float) if offset_fn else np.zeros(3)
        for j, name in enumerate(names):
            positions[i, j] = np.asarray(pose[name], dtype=float) + d
    return LandmarkTrace(
        timestamps=timestamps,
        landmark_names=names,
        positions=positions,
        visibility=np.ones((n_frames, len(names))),
        unit_scale=unit_scale,
        up_axis=up_axis,
        frame_rate_hint=rate,
    )


def trace_doc(pose: dict, timestamps, unit_scale: float = 1.0,
              up_axis: str = "+y", rate_hint=None) -> dict:
    """Raw trace-file dict for parser tests."""
    frames = []
    for t in timestamps:
        landmarks = {name: {"x": x, "y": y, "z": z, "visibility": 1.0}
                     for name, (x, y, z) in pose.items()}
        frames.append({"t": t, "landmarks": landmarks})
    return {"version": 1, "unit_scale": unit_scale, "up_axis": up_axis,
            "frame_rate_hint": rate_hint, "frames": frames}


def write_doc(path: Path, doc: dict) -> Path:
    path.write_text(json.dumps(doc))
    return path


def all_33_pose(point=(0.0, 0.0, 0.0)) -> dict:
    return {name: point for name in POSE_LANDMARKS}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when == "call":
                lines.append((rep.nodeid.split("::")[-1], outcome.upper()))
    for rep in terminalreporter.stats.get("skipped", []):
        if "test_acceptance" in rep.nodeid:
            lines.append((rep.nodeid.split("::")[-1], "SKIPPED"))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in lines:
            terminalreporter.write_line(f"{outcome:7s} {name}")
