"""effortwave: pose-landmark traces -> joint forces -> effort vibration.

The pipeline estimates translational joint forces from video-derived pose
landmarks with a link-model inverse dynamics pass, maps force magnitude to a
sense-of-effort signal through Stevens' power law, and renders it as a
200 Hz amplitude-modulated waveform written to WAV.
"""

__version__ = "0.1.0"

from .body_model import (
    BodyModel,
    SegmentCogTrace,
    SegmentDef,
    compute_cog_positions,
    default_body_model,
    load_body_model,
    whole_body_com,
)
from .config import PipelineConfig, load_config
from .dynamics import (
    GrfTrace,
    JointForceTrace,
    KinematicsTrace,
    SavGolSpec,
    ground_reaction_force,
    inverse_dynamics_tree,
    savgol_coefficients,
    smooth_differentiate,
)
from .haptics import (
    EffortSignal,
    IntensityModelParams,
    VibrationWaveform,
    default_intensity_params,
    effort_from_force,
    intensity_to_amplitude,
    normalize_force_magnitude,
    synthesize_am,
    write_wav,
)
from .pipeline import PipelineReport, emit_plots, run_pipeline
from .trace_io import (
    LandmarkFrame,
    LandmarkTrace,
    parse_landmark_trace,
    resample_uniform,
    serialize_landmark_trace,
)

__all__ = [
    "BodyModel", "SegmentCogTrace", "SegmentDef", "compute_cog_positions",
    "default_body_model", "load_body_model", "whole_body_com",
    "PipelineConfig", "load_config",
    "GrfTrace", "JointForceTrace", "KinematicsTrace", "SavGolSpec",
    "ground_reaction_force", "inverse_dynamics_tree", "savgol_coefficients",
    "smooth_differentiate",
    "EffortSignal", "IntensityModelParams", "VibrationWaveform",
    "default_intensity_params", "effort_from_force", "intensity_to_amplitude",
    "normalize_force_magnitude", "synthesize_am", "write_wav",
    "PipelineReport", "emit_plots", "run_pipeline",
    "LandmarkFrame", "LandmarkTrace", "parse_landmark_trace",
    "resample_uniform", "serialize_landmark_trace",
]
