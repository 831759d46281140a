"""Savitzky-Golay differentiation and translational inverse dynamics.

Accelerations come from a single least-squares polynomial filter pass over
the CoG positions (smoothing and second differentiation in one convolution).
Joint forces then follow from the translational equation of motion solved
leaf-to-root over the body tree:

    f_joint(seg) = m_seg * (a_seg - g) + sum of child joint forces

with g = (0, -gravity_magnitude, 0) and zero external force at terminal
joints. The entry keyed by the root segment is the external force closing
the whole-body balance (the ground reaction when the ground is the only
contact).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .body_model import BodyModel, SegmentCogTrace
from .errors import NumericalError

GRAVITY_MAGNITUDE = 9.81  # m/s^2, default; configurable end to end


@dataclass(frozen=True)
class SavGolSpec:
    """Least-squares polynomial filter: window width, fit order, derivative."""

    window: int
    poly_order: int
    derivative_order: int = 2

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be an odd integer >= 3, got {self.window}")
        if self.poly_order < 2:
            raise ValueError(f"poly_order must be >= 2, got {self.poly_order}")
        if self.poly_order >= self.window:
            raise ValueError(f"poly_order ({self.poly_order}) must be < window ({self.window})")
        if self.derivative_order not in (0, 1, 2):
            raise ValueError(f"derivative_order must be 0, 1 or 2, got {self.derivative_order}")
        if self.derivative_order > self.poly_order:
            raise ValueError("derivative_order must not exceed poly_order")

    @property
    def half(self) -> int:
        return self.window // 2


DEFAULT_SAVGOL = SavGolSpec(window=9, poly_order=3, derivative_order=2)


def savgol_coefficients(spec: SavGolSpec) -> np.ndarray:
    """Convolution weights for the filter, in sample (time) order.

    Applied as a dot product against window samples of a polynomial of
    degree <= poly_order on a uniform grid with step h, the result times
    derivative_order! / h**derivative_order is the exact derivative at the
    window center. For derivative 0 the weights sum to 1.
    """
    half = spec.half
    x = np.arange(-half, half + 1, dtype=float)
    design = np.vander(x, spec.poly_order + 1, increasing=True)
    return np.linalg.pinv(design)[spec.derivative_order]


def valid_range(n_frames: int, window: int) -> range:
    """Interior frame indices where the full filter window fits."""
    half = window // 2
    return range(half, max(n_frames - half, half))


def smooth_differentiate(series: np.ndarray, dt: float, spec: SavGolSpec) -> np.ndarray:
    """Filter a per-frame series; returns the derivative_order-th derivative.

    Parameters
    ----------
    series : (n,) or (n, k) samples on a uniform grid.
    dt : grid step in seconds.
    spec : filter specification; derivative_order 2 yields acceleration.

    Returns
    -------
    Array of the same shape. Edge frames where the window does not fit are
    NaN; no padding is fabricated.
    """
    series = np.asarray(series, dtype=float)
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    n = series.shape[0]
    if n < spec.window:
        raise ValueError(f"series length {n} is shorter than the filter window {spec.window}")

    weights = savgol_coefficients(spec)
    scale = math.factorial(spec.derivative_order) / dt ** spec.derivative_order
    windows = sliding_window_view(series, spec.window, axis=0)  # (n-window+1, ..., window)
    core = windows @ weights * scale

    out = np.full_like(series, np.nan)
    out[spec.half:n - spec.half] = core
    return out


@dataclass
class KinematicsTrace:
    """Per-segment CoG accelerations (m/s^2) with the filter-valid range."""

    timestamps: np.ndarray
    accels: dict[str, np.ndarray]
    valid: range

    @property
    def n_frames(self) -> int:
        return len(self.timestamps)

    @property
    def valid_slice(self) -> slice:
        return slice(self.valid.start, self.valid.stop)


@dataclass
class JointForceTrace:
    """Per-joint force vectors in Newtons, keyed by the supported segment."""

    timestamps: np.ndarray
    forces: dict[str, np.ndarray]
    valid: range

    @property
    def joint_names(self) -> tuple[str, ...]:
        return tuple(self.forces.keys())

    @property
    def valid_slice(self) -> slice:
        return slice(self.valid.start, self.valid.stop)


@dataclass
class GrfTrace:
    """Ground reaction force vectors in Newtons."""

    timestamps: np.ndarray
    values: np.ndarray
    valid: range

    @property
    def valid_slice(self) -> slice:
        return slice(self.valid.start, self.valid.stop)


def differentiate_cogs(cogs: SegmentCogTrace, dt: float, spec: SavGolSpec) -> KinematicsTrace:
    """Second-differentiate every segment CoG trajectory in one pass each."""
    if spec.derivative_order != 2:
        raise ValueError("acceleration requires derivative_order 2, "
                         f"got {spec.derivative_order}")
    accels = {name: smooth_differentiate(xyz, dt, spec) for name, xyz in cogs.cogs.items()}
    return KinematicsTrace(
        timestamps=cogs.timestamps.copy(),
        accels=accels,
        valid=valid_range(cogs.n_frames, spec.window),
    )


def gravity_vector(gravity_magnitude: float) -> np.ndarray:
    return np.array([0.0, -gravity_magnitude, 0.0])


def inverse_dynamics_tree(cogs: SegmentCogTrace,
                          accels: KinematicsTrace,
                          model: BodyModel,
                          subject_mass_kg: float,
                          gravity_magnitude: float = GRAVITY_MAGNITUDE,
                          ) -> JointForceTrace:
    """Solve the translational equation of motion leaf-to-root.

    Terminal joints carry no external force, so each leaf equation is
    directly solvable; interior joints add the already-solved child joint
    forces. Children are summed in model declaration order so results do
    not depend on traversal implementation details.
    """
    if subject_mass_kg <= 0:
        raise ValueError(f"subject_mass_kg must be > 0, got {subject_mass_kg}")
    if cogs.n_frames != accels.n_frames:
        raise ValueError("cogs and accels must cover the same frames "
                         f"({cogs.n_frames} vs {accels.n_frames})")
    g = gravity_vector(gravity_magnitude)

    forces: dict[str, np.ndarray] = {}
    for name in reversed(model.traversal_order()):  # leaves before parents
        seg = model.segment(name)
        m = seg.mass_ratio * subject_mass_kg
        f = m * (accels.accels[name] - g)
        for child in model.children_of(name):
            f = f + forces[child]
        forces[name] = f

    ordered = {name: forces[name] for name in model.segment_names}
    trace = JointForceTrace(timestamps=accels.timestamps.copy(),
                            forces=ordered, valid=accels.valid)
    _check_finite_in_valid(trace)
    return trace


def _check_finite_in_valid(trace: JointForceTrace) -> None:
    sl = trace.valid_slice
    for name, f in trace.forces.items():
        if not np.all(np.isfinite(f[sl])):
            raise NumericalError(f"joint {name!r} force is non-finite inside the valid range")


def ground_reaction_force(com_accel: np.ndarray,
                          subject_mass_kg: float,
                          gravity_magnitude: float = GRAVITY_MAGNITUDE,
                          timestamps: np.ndarray | None = None,
                          valid: range | None = None,
                          ) -> GrfTrace:
    """Whole-body ground reaction force F = M * (a_com - g)."""
    if subject_mass_kg <= 0:
        raise ValueError(f"subject_mass_kg must be > 0, got {subject_mass_kg}")
    com_accel = np.asarray(com_accel, dtype=float)
    values = subject_mass_kg * (com_accel - gravity_vector(gravity_magnitude))
    n = len(values)
    if timestamps is None:
        timestamps = np.arange(n, dtype=float)
    if valid is None:
        valid = range(0, n)
    return GrfTrace(timestamps=np.asarray(timestamps, dtype=float),
                    values=values, valid=valid)


def write_forces_csv(trace: JointForceTrace, path: str | Path) -> None:
    """CSV of joint forces: t, then fx/fy/fz per joint; valid frames only."""
    sl = trace.valid_slice
    names = trace.joint_names
    header = ["t"]
    for name in names:
        header.extend([f"{name}_fx", f"{name}_fy", f"{name}_fz"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        times = trace.timestamps[sl]
        columns = [trace.forces[name][sl] for name in names]
        for i, t in enumerate(times):
            row = [repr(float(t))]
            for col in columns:
                row.extend(repr(float(v)) for v in col[i])
            writer.writerow(row)


def write_grf_csv(trace: GrfTrace, path: str | Path) -> None:
    """CSV of ground reaction force: t, fx, fy, fz; valid frames only."""
    sl = trace.valid_slice
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "fx", "fy", "fz"])
        for t, v in zip(trace.timestamps[sl], trace.values[sl]):
            writer.writerow([repr(float(t))] + [repr(float(c)) for c in v])
