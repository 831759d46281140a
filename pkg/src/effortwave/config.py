"""Pipeline configuration: defaults, JSON loading, validation.

The config file is JSON whose keys mirror the field names below, with
``savgol`` and ``intensity`` as nested objects, e.g.::

    {
      "subject_mass_kg": 60.0,
      "savgol": {"window": 9, "poly_order": 3},
      "intensity": {"carrier_frequency": 200.0, "alpha": 0.4,
                    "detection_threshold_amplitude": 0.1, "max_intensity": 1.0},
      "stevens_exponent": 1.7,
      "gravity_magnitude": 9.81,
      "output_sample_rate": 48000,
      "normalization_mode": "per-clip-max",
      "source": "centroid"
    }

subject_mass_kg is the only required field. ``body`` may name a model
override file (resolved relative to the config file). ``zero_z`` suppresses
the depth axis before dynamics for monocular 2-D traces;
``reference_force`` (Newtons) feeds fixed-reference normalization.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .dynamics import SavGolSpec, GRAVITY_MAGNITUDE
from .errors import ConfigError
from .haptics import (
    DEFAULT_STEVENS_EXPONENT,
    NORMALIZATION_MODES,
    PER_CLIP_MAX,
    FIXED_REFERENCE,
    IntensityModelParams,
    default_intensity_params,
)

SOURCE_CENTROID = "centroid"


@dataclass
class PipelineConfig:
    subject_mass_kg: float
    savgol: SavGolSpec = field(default_factory=lambda: SavGolSpec(9, 3, 2))
    body: str | None = None
    stevens_exponent: float = DEFAULT_STEVENS_EXPONENT
    intensity: IntensityModelParams = field(default_factory=default_intensity_params)
    gravity_magnitude: float = GRAVITY_MAGNITUDE
    output_sample_rate: float = 48000.0
    normalization_mode: str = PER_CLIP_MAX
    reference_force: float | None = None
    zero_z: bool = False
    source: str = SOURCE_CENTROID

    def __post_init__(self):
        for name in ("subject_mass_kg", "stevens_exponent", "gravity_magnitude",
                     "output_sample_rate"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise ConfigError(f"config field {name!r} must be > 0, got {value!r}")
        if self.normalization_mode not in NORMALIZATION_MODES:
            raise ConfigError(f"normalization_mode must be one of {NORMALIZATION_MODES}, "
                              f"got {self.normalization_mode!r}")
        if self.normalization_mode == FIXED_REFERENCE:
            if self.reference_force is None or not self.reference_force > 0:
                raise ConfigError("fixed-reference normalization requires a positive "
                                  "'reference_force'")
        if self.savgol.derivative_order != 2:
            raise ConfigError("the dynamics stage needs savgol.derivative_order 2, "
                              f"got {self.savgol.derivative_order}")
        if self.output_sample_rate <= 2 * self.intensity.carrier_frequency:
            raise ConfigError(f"output_sample_rate ({self.output_sample_rate}) must exceed "
                              f"twice the carrier frequency ({self.intensity.carrier_frequency})")
        if not self.source:
            raise ConfigError("source must be 'centroid' or a joint name")


def _build_savgol(doc: dict) -> SavGolSpec:
    allowed = {"window", "poly_order", "derivative_order"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown savgol field(s): {sorted(unknown)}")
    try:
        return SavGolSpec(
            window=doc.get("window", 9),
            poly_order=doc.get("poly_order", 3),
            derivative_order=doc.get("derivative_order", 2),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid savgol spec: {exc}") from exc


def _build_intensity(doc: dict) -> IntensityModelParams:
    defaults = default_intensity_params()
    allowed = {"carrier_frequency", "detection_threshold_amplitude", "alpha", "max_intensity"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown intensity field(s): {sorted(unknown)}")
    try:
        return IntensityModelParams(
            carrier_frequency=doc.get("carrier_frequency", defaults.carrier_frequency),
            detection_threshold_amplitude=doc.get(
                "detection_threshold_amplitude", defaults.detection_threshold_amplitude),
            alpha=doc.get("alpha", defaults.alpha),
            max_intensity=doc.get("max_intensity", defaults.max_intensity),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid intensity params: {exc}") from exc


def load_config(path: str | Path) -> PipelineConfig:
    """Load and validate a pipeline config file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")

    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config field(s): {sorted(unknown)}")
    if "subject_mass_kg" not in doc:
        raise ConfigError(f"{path}: missing required config field 'subject_mass_kg'")

    kwargs: dict = dict(doc)
    kwargs["savgol"] = _build_savgol(doc.get("savgol", {}) or {})
    kwargs["intensity"] = _build_intensity(doc.get("intensity", {}) or {})

    body = doc.get("body")
    if body is not None:
        if not isinstance(body, str):
            raise ConfigError(f"{path}: 'body' must be a file path or null")
        kwargs["body"] = str((path.parent / body).resolve())

    return PipelineConfig(**kwargs)
