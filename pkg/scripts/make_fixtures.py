#!/usr/bin/env python3
"""Regenerate the checked-in JSON fixtures under tests/fixtures.

Fixtures are synthetic but fully deterministic, so the test suite never
depends on the pose-extraction toolchain. The squat traces translate the
whole standing skeleton vertically by 0.1 * sin(2*pi*t) meters, which makes
every segment CoG (and therefore the whole-body CoM) follow the same
sinusoid exactly.
"""
from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# Standing pose, meters, +y up, z forward-ish. Loosely a 1.7 m adult.
BASE_POSE = {
    "nose": (0.0, 1.66, 0.08),
    "left_ear": (0.05, 1.62, 0.02),
    "right_ear": (-0.05, 1.62, 0.02),
    "left_shoulder": (0.18, 1.45, 0.0),
    "right_shoulder": (-0.18, 1.45, 0.0),
    "left_elbow": (0.25, 1.18, 0.02),
    "right_elbow": (-0.25, 1.18, 0.02),
    "left_wrist": (0.27, 0.93, 0.05),
    "right_wrist": (-0.27, 0.93, 0.05),
    "left_index": (0.28, 0.84, 0.07),
    "right_index": (-0.28, 0.84, 0.07),
    "left_hip": (0.10, 0.92, 0.0),
    "right_hip": (-0.10, 0.92, 0.0),
    "left_knee": (0.11, 0.50, 0.01),
    "right_knee": (-0.11, 0.50, 0.01),
    "left_ankle": (0.12, 0.09, 0.0),
    "right_ankle": (-0.12, 0.09, 0.0),
    "left_heel": (0.12, 0.03, -0.03),
    "right_heel": (-0.12, 0.03, -0.03),
    "left_foot_index": (0.13, 0.02, 0.12),
    "right_foot_index": (-0.13, 0.02, 0.12),
}

SQUAT_AMPLITUDE_M = 0.1
SQUAT_FREQUENCY_HZ = 1.0


def _trace(frames, rate):
    return {
        "version": 1,
        "unit_scale": 1.0,
        "up_axis": "+y",
        "frame_rate_hint": float(rate),
        "frames": frames,
    }


def _frame(t, dy):
    import math
    landmarks = {}
    for name, (x, y, z) in BASE_POSE.items():
        landmarks[name] = {"x": x, "y": y + dy, "z": z, "visibility": 1.0}
    return {"t": t, "landmarks": landmarks}


def make_static(rate=50.0, duration=2.0):
    import math
    n = int(round(duration * rate)) + 1
    frames = [_frame(k / rate, 0.0) for k in range(n)]
    return _trace(frames, rate)


def make_squat(rate, duration=3.0):
    import math
    n = int(round(duration * rate)) + 1
    frames = []
    for k in range(n):
        t = k / rate
        dy = SQUAT_AMPLITUDE_M * math.sin(2.0 * math.pi * SQUAT_FREQUENCY_HZ * t)
        frames.append(_frame(t, dy))
    return _trace(frames, rate)


CONFIG_60KG = {
    "subject_mass_kg": 60.0,
    "savgol": {"window": 9, "poly_order": 3, "derivative_order": 2},
    "stevens_exponent": 1.7,
    "gravity_magnitude": 9.81,
    "output_sample_rate": 48000,
    "normalization_mode": "per-clip-max",
    "source": "centroid",
}


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "static_60kg.json").write_text(json.dumps(make_static()))
    for rate in (30, 60, 100, 120):
        (FIXTURES / f"squat_{rate}fps.json").write_text(json.dumps(make_squat(rate)))
    (FIXTURES / "config_60kg.json").write_text(json.dumps(CONFIG_60KG, indent=2))
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
