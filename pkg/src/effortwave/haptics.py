"""Force magnitude -> sense of effort -> amplitude-modulated vibration.

Force norms are normalized into [0, 1], raised to the Stevens power-law
exponent for force (1.7 by default) to give the effort signal, and mapped
to a carrier envelope through the inverse of the perceived-intensity model

    I = (A / A_T)**(2 * alpha)   =>   A = A_T * I**(1 / (2 * alpha))

so that perceived vibration intensity tracks effort. The envelope is
normalized to the amplitude at max intensity, giving audio in [-1, 1] that
is written as mono 16-bit PCM WAV.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

PER_CLIP_MAX = "per-clip-max"
FIXED_REFERENCE = "fixed-reference"
NORMALIZATION_MODES = (PER_CLIP_MAX, FIXED_REFERENCE)

DEFAULT_STEVENS_EXPONENT = 1.7  # Stevens power-law exponent for force


@dataclass(frozen=True)
class IntensityModelParams:
    """Perceived-intensity model constants at the carrier frequency."""

    carrier_frequency: float = 200.0
    detection_threshold_amplitude: float = 0.1
    alpha: float = 0.4
    max_intensity: float = 1.0

    def __post_init__(self):
        for name in ("carrier_frequency", "detection_threshold_amplitude",
                     "alpha", "max_intensity"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")


def default_intensity_params() -> IntensityModelParams:
    """Parameters shipped with the package (see data/intensity_200hz.json)."""
    text = resources.files("effortwave.data").joinpath("intensity_200hz.json").read_text()
    doc = json.loads(text)
    return IntensityModelParams(
        carrier_frequency=doc["carrier_frequency"],
        detection_threshold_amplitude=doc["detection_threshold_amplitude"],
        alpha=doc["alpha"],
        max_intensity=doc["max_intensity"],
    )


@dataclass
class EffortSignal:
    """Per-frame sense-of-effort scalar in [0, 1] plus its source label."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size and (np.min(self.values) < 0 or np.max(self.values) > 1):
            raise ValueError("effort values must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class VibrationWaveform:
    """Sampled AM signal; every sample in [-1, 1]."""

    sample_rate: float
    samples: np.ndarray
    carrier_frequency: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.size and np.max(np.abs(self.samples)) > 1.0:
            raise ValueError("waveform samples must lie in [-1, 1]")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def normalize_force_magnitude(forces: np.ndarray, mode: str = PER_CLIP_MAX,
                              reference: float | None = None) -> np.ndarray:
    """Per-frame force norms scaled into [0, 1].

    per-clip-max divides by the clip's peak norm (all-zero input maps to all
    zeros); fixed-reference divides by a configured reference force and
    clamps at 1.
    """
    forces = np.asarray(forces, dtype=float)
    norms = np.linalg.norm(forces, axis=-1)
    if mode == PER_CLIP_MAX:
        peak = np.max(norms) if norms.size else 0.0
        if peak == 0.0:
            return np.zeros_like(norms)
        return norms / peak
    if mode == FIXED_REFERENCE:
        if reference is None or reference <= 0:
            raise ValueError("fixed-reference normalization needs a positive reference force")
        return np.minimum(norms / reference, 1.0)
    raise ValueError(f"unknown normalization mode {mode!r}; expected one of {NORMALIZATION_MODES}")


def effort_from_force(normalized: np.ndarray, exponent: float = DEFAULT_STEVENS_EXPONENT,
                      source: str = "") -> EffortSignal:
    """Stevens power-law mapping: effort = normalized_force ** exponent."""
    if exponent <= 0:
        raise ValueError(f"exponent must be > 0, got {exponent}")
    normalized = np.asarray(normalized, dtype=float)
    if normalized.size and (np.min(normalized) < 0 or np.max(normalized) > 1):
        raise ValueError("normalized force must lie in [0, 1]")
    return EffortSignal(values=np.power(normalized, exponent), source=source)


def intensity_to_amplitude(i_total, params: IntensityModelParams):
    """Amplitude reproducing a target perceived intensity; A(0) = 0."""
    i_total = np.asarray(i_total, dtype=float)
    if np.any(i_total < 0):
        raise ValueError("intensity must be >= 0")
    a = params.detection_threshold_amplitude * i_total ** (1.0 / (2.0 * params.alpha))
    return float(a) if a.ndim == 0 else a


def synthesize_am(effort: EffortSignal, frame_times: np.ndarray,
                  params: IntensityModelParams, sample_rate: float) -> VibrationWaveform:
    """Render effort as an amplitude-modulated carrier.

    The effort signal is linearly interpolated from frame times to audio
    sample times, mapped through the intensity model, and normalized so the
    amplitude at max_intensity is 1. Audio spans the frame-time range.
    """
    frame_times = np.asarray(frame_times, dtype=float)
    if len(effort) == 0 or len(frame_times) != len(effort):
        raise ValueError("effort and frame_times must be non-empty and the same length")
    if sample_rate <= 2 * params.carrier_frequency:
        raise ValueError(f"sample_rate ({sample_rate}) must exceed twice the carrier "
                         f"frequency ({params.carrier_frequency})")

    duration = frame_times[-1] - frame_times[0]
    n_samples = math.ceil(duration * sample_rate)
    t = np.arange(n_samples) / sample_rate
    effort_interp = np.interp(frame_times[0] + t, frame_times, effort.values)

    peak_amplitude = intensity_to_amplitude(params.max_intensity, params)
    envelope = intensity_to_amplitude(params.max_intensity * effort_interp, params) / peak_amplitude
    samples = envelope * np.sin(2.0 * np.pi * params.carrier_frequency * t)
    return VibrationWaveform(sample_rate=sample_rate, samples=samples,
                             carrier_frequency=params.carrier_frequency)


def quantize_samples(samples: np.ndarray) -> np.ndarray:
    """[-1, 1] floats to int16, rounding half away from zero."""
    samples = np.asarray(samples, dtype=float)
    scaled = samples * 32767.0
    return (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int16)


def write_wav(wave: VibrationWaveform, path: str | Path) -> None:
    """Write mono 16-bit signed PCM, little endian, RIFF/WAVE container."""
    if wave.samples.size and np.max(np.abs(wave.samples)) > 1.0:
        raise ValueError("samples out of range [-1, 1]")
    pcm = quantize_samples(wave.samples)
    data = pcm.astype("<i2").tobytes()
    sample_rate = int(round(wave.sample_rate))
    byte_rate = sample_rate * 2  # mono, 2 bytes per sample
    header = b"".join([
        b"RIFF", struct.pack("<I", 36 + len(data)), b"WAVE",
        b"fmt ", struct.pack("<IHHIIHH", 16, 1, 1, sample_rate, byte_rate, 2, 16),
        b"data", struct.pack("<I", len(data)),
    ])
    Path(path).write_bytes(header + data)


def write_effort_csv(path: str | Path, frame_times: np.ndarray,
                     effort: EffortSignal, params: IntensityModelParams) -> None:
    """Diagnostic CSV of (t, effort, envelope) at frame times."""
    peak = intensity_to_amplitude(params.max_intensity, params)
    envelope = intensity_to_amplitude(params.max_intensity * effort.values, params) / peak
    with open(path, "w", newline="") as fh:
        fh.write("t,effort,envelope\r\n")
        for t, e, a in zip(frame_times, effort.values, envelope):
            fh.write(f"{float(t)!r},{float(e)!r},{float(a)!r}\r\n")
