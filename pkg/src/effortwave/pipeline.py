"""End-to-end orchestration: trace file -> forces -> effort -> audio.

Stage order: parse -> resample -> cog -> differentiate -> dynamics ->
normalize -> effort -> synthesize -> write. Every stage failure is wrapped
in StageError carrying the stage name; outputs are keyed by the output
directory so independent runs never collide.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import body_model as bm
from . import dynamics as dyn
from . import haptics as hap
from . import trace_io
from .config import PipelineConfig, SOURCE_CENTROID, load_config
from .errors import ConfigError, InsufficientFramesError, StageError

logger = logging.getLogger(__name__)


@dataclass
class PipelineReport:
    """Summary of one pipeline run; serialized to report.json."""

    trace_path: str
    source: str
    frame_count: int
    frame_rate: float
    duration_s: float
    valid_start: int
    valid_stop: int
    peak_force_n: float
    peak_force_frame: int
    stage_seconds: dict[str, float] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2)


@dataclass
class PipelineIntermediates:
    """Arrays produced along the way, exposed for tests and plotting."""

    trace: trace_io.LandmarkTrace
    dt: float
    model: bm.BodyModel
    cogs: bm.SegmentCogTrace
    kinematics: dyn.KinematicsTrace
    joint_forces: dyn.JointForceTrace
    grf: dyn.GrfTrace
    valid_times: np.ndarray
    effort: hap.EffortSignal | None = None
    envelope: np.ndarray | None = None
    waveform: hap.VibrationWaveform | None = None


class _StageTimer:
    def __init__(self):
        self.seconds: dict[str, float] = {}

    def run(self, stage: str, fn, *args, **kwargs):
        logger.info("stage %s", stage)
        start = time.perf_counter()
        try:
            result = fn(*args, **kwargs)
        except Exception as exc:
            raise StageError(stage, exc) from exc
        self.seconds[stage] = time.perf_counter() - start
        return result


def _resolve_model(cfg: PipelineConfig) -> bm.BodyModel:
    if cfg.body is None:
        return bm.default_body_model()
    return bm.load_body_model(cfg.body)


def _parse_stage(trace_path, model: bm.BodyModel, window: int) -> trace_io.LandmarkTrace:
    trace = trace_io.parse_landmark_trace(trace_path,
                                          required_landmarks=model.required_landmarks())
    if trace.n_frames < window:
        raise InsufficientFramesError(
            f"trace has {trace.n_frames} frames but the filter window needs {window}; "
            "use a longer clip or a smaller window")
    return trace


def _resample_stage(trace: trace_io.LandmarkTrace) -> tuple[trace_io.LandmarkTrace, float]:
    """Resample onto a uniform grid unless timing jitter is negligible."""
    mean_dt = trace.mean_interval()
    if trace.timestamp_jitter() < trace_io.UNIFORM_JITTER_TOLERANCE:
        return trace, mean_dt
    rate = trace.frame_rate_hint if trace.frame_rate_hint else 1.0 / mean_dt
    resampled = trace_io.resample_uniform(trace, rate)
    logger.info("resampled %d -> %d frames at %.3f Hz", trace.n_frames,
                resampled.n_frames, rate)
    return resampled, 1.0 / rate


def _cog_stage(trace, model, zero_z: bool) -> bm.SegmentCogTrace:
    cogs = bm.compute_cog_positions(trace, model)
    if zero_z:
        for xyz in cogs.cogs.values():
            xyz[:, 2] = 0.0
    return cogs


def _select_source_forces(source: str, joint_forces: dyn.JointForceTrace,
                          grf: dyn.GrfTrace) -> np.ndarray:
    if source == SOURCE_CENTROID:
        return grf.values
    if source in joint_forces.forces:
        return joint_forces.forces[source]
    raise ConfigError(f"source {source!r} is neither 'centroid' nor a joint name; "
                      f"joints: {list(joint_forces.joint_names)}")


def run_dynamics(trace_path: str | Path, cfg: PipelineConfig,
                 timer: _StageTimer | None = None) -> PipelineIntermediates:
    """Stages up to joint forces and ground reaction force."""
    timer = timer or _StageTimer()
    model = _resolve_model(cfg)
    trace = timer.run("parse", _parse_stage, trace_path, model, cfg.savgol.window)
    trace, dt = timer.run("resample", _resample_stage, trace)
    if trace.n_frames < cfg.savgol.window:
        raise StageError("resample", InsufficientFramesError(
            f"resampling left {trace.n_frames} frames but the filter window "
            f"needs {cfg.savgol.window}"))
    cogs = timer.run("cog", _cog_stage, trace, model, cfg.zero_z)
    kin = timer.run("differentiate", dyn.differentiate_cogs, cogs, dt, cfg.savgol)

    def _dynamics():
        jft = dyn.inverse_dynamics_tree(cogs, kin, model, cfg.subject_mass_kg,
                                        cfg.gravity_magnitude)
        com = bm.whole_body_com(cogs, model)
        com_accel = dyn.smooth_differentiate(com, dt, cfg.savgol)
        grf = dyn.ground_reaction_force(com_accel, cfg.subject_mass_kg,
                                        cfg.gravity_magnitude,
                                        timestamps=cogs.timestamps, valid=kin.valid)
        return jft, grf

    jft, grf = timer.run("dynamics", _dynamics)
    return PipelineIntermediates(
        trace=trace, dt=dt, model=model, cogs=cogs, kinematics=kin,
        joint_forces=jft, grf=grf,
        valid_times=trace.timestamps[kin.valid_slice],
    )


def _write_force_outputs(out_dir: Path, inter: PipelineIntermediates) -> dict[str, str]:
    forces_csv = out_dir / "joint_forces.csv"
    grf_csv = out_dir / "grf.csv"
    dyn.write_forces_csv(inter.joint_forces, forces_csv)
    dyn.write_grf_csv(inter.grf, grf_csv)
    return {"joint_forces_csv": str(forces_csv), "grf_csv": str(grf_csv)}


def _peak_force(inter: PipelineIntermediates) -> tuple[float, int]:
    sl = inter.joint_forces.valid_slice
    peak, peak_frame = 0.0, inter.joint_forces.valid.start
    for f in inter.joint_forces.forces.values():
        norms = np.linalg.norm(f[sl], axis=-1)
        i = int(np.argmax(norms))
        if norms[i] > peak:
            peak, peak_frame = float(norms[i]), sl.start + i
    return peak, peak_frame


def emit_plots(out_dir: str | Path, inter: PipelineIntermediates) -> list[Path]:
    """Write force-magnitude, effort, and envelope time-series plots."""
    out_dir = Path(out_dir)
    if len(inter.valid_times) == 0:
        raise InsufficientFramesError(
            "no valid frames to plot: the filter window exceeds the clip length")
    paths = []
    sl = inter.joint_forces.valid_slice

    fig, ax = plt.subplots(figsize=(9, 5))
    for name, f in inter.joint_forces.forces.items():
        ax.plot(inter.valid_times, np.linalg.norm(f[sl], axis=-1), label=name, lw=1)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("joint force magnitude [N]")
    ax.legend(fontsize=6, ncol=3)
    fig.tight_layout()
    path = out_dir / "joint_forces.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    paths.append(path)

    if inter.effort is not None:
        fig, ax = plt.subplots(figsize=(9, 3))
        ax.plot(inter.valid_times, inter.effort.values, color="tab:red")
        ax.set_xlabel("time [s]")
        ax.set_ylabel(f"effort ({inter.effort.source})")
        ax.set_ylim(-0.05, 1.05)
        fig.tight_layout()
        path = out_dir / "effort.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        paths.append(path)

    if inter.envelope is not None:
        fig, ax = plt.subplots(figsize=(9, 3))
        ax.plot(inter.valid_times, inter.envelope, color="tab:blue")
        ax.set_xlabel("time [s]")
        ax.set_ylabel("carrier envelope")
        ax.set_ylim(-0.05, 1.05)
        fig.tight_layout()
        path = out_dir / "envelope.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        paths.append(path)

    return paths


def run_pipeline(trace_path: str | Path, config_path: str | Path,
                 output_dir: str | Path, source: str | None = None,
                 plots: bool = True) -> PipelineReport:
    """Full pipeline: trace file + config -> WAV, CSVs, plots, report."""
    cfg = load_config(config_path)
    return run_pipeline_with_config(trace_path, cfg, output_dir, source=source,
                                    plots=plots)


def run_pipeline_with_config(trace_path: str | Path, cfg: PipelineConfig,
                             output_dir: str | Path, source: str | None = None,
                             plots: bool = True) -> PipelineReport:
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    timer = _StageTimer()
    source = source or cfg.source

    inter = run_dynamics(trace_path, cfg, timer)
    sl = inter.kinematics.valid_slice

    def _normalize():
        selected = _select_source_forces(source, inter.joint_forces, inter.grf)
        return hap.normalize_force_magnitude(selected[sl], cfg.normalization_mode,
                                             reference=cfg.reference_force)

    normalized = timer.run("normalize", _normalize)
    effort = timer.run("effort", hap.effort_from_force, normalized,
                       cfg.stevens_exponent, source)
    waveform = timer.run("synthesize", hap.synthesize_am, effort, inter.valid_times,
                         cfg.intensity, cfg.output_sample_rate)

    peak_env = hap.intensity_to_amplitude(cfg.intensity.max_intensity, cfg.intensity)
    envelope = hap.intensity_to_amplitude(
        cfg.intensity.max_intensity * effort.values, cfg.intensity) / peak_env
    inter.effort, inter.envelope, inter.waveform = effort, envelope, waveform

    def _write():
        outputs = _write_force_outputs(out_dir, inter)
        wav_path = out_dir / "vibration.wav"
        hap.write_wav(waveform, wav_path)
        outputs["wav"] = str(wav_path)
        effort_csv = out_dir / "effort.csv"
        hap.write_effort_csv(effort_csv, inter.valid_times, effort, cfg.intensity)
        outputs["effort_csv"] = str(effort_csv)
        return outputs

    outputs = timer.run("write", _write)
    if plots:
        plot_paths = timer.run("plots", emit_plots, out_dir, inter)
        outputs["plots"] = [str(p) for p in plot_paths]

    peak, peak_frame = _peak_force(inter)
    report = PipelineReport(
        trace_path=str(trace_path),
        source=source,
        frame_count=inter.trace.n_frames,
        frame_rate=1.0 / inter.dt,
        duration_s=inter.trace.duration,
        valid_start=inter.kinematics.valid.start,
        valid_stop=inter.kinematics.valid.stop,
        peak_force_n=peak,
        peak_force_frame=peak_frame,
        stage_seconds=dict(timer.seconds),
        outputs=outputs,
    )
    report_path = out_dir / "report.json"
    report_path.write_text(report.to_json())
    report.outputs["report"] = str(report_path)
    logger.info("pipeline done: peak force %.1f N at frame %d", peak, peak_frame)
    return report


def run_forces_only(trace_path: str | Path, config_path: str | Path,
                    output_dir: str | Path) -> PipelineReport:
    """Dynamics-only run: identical force CSVs to a full run, no haptics."""
    cfg = load_config(config_path)
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    timer = _StageTimer()
    inter = run_dynamics(trace_path, cfg, timer)
    outputs = timer.run("write", _write_force_outputs, out_dir, inter)
    peak, peak_frame = _peak_force(inter)
    report = PipelineReport(
        trace_path=str(trace_path),
        source=cfg.source,
        frame_count=inter.trace.n_frames,
        frame_rate=1.0 / inter.dt,
        duration_s=inter.trace.duration,
        valid_start=inter.kinematics.valid.start,
        valid_stop=inter.kinematics.valid.stop,
        peak_force_n=peak,
        peak_force_frame=peak_frame,
        stage_seconds=dict(timer.seconds),
        outputs=outputs,
    )
    report_path = out_dir / "report.json"
    report_path.write_text(report.to_json())
    report.outputs["report"] = str(report_path)
    return report


def synthesize_from_csv(effort_csv: str | Path, config_path: str | Path,
                        wav_path: str | Path) -> hap.VibrationWaveform:
    """Rebuild audio from a previously exported (t, effort, ...) CSV."""
    cfg = load_config(config_path)
    rows = np.genfromtxt(effort_csv, delimiter=",", names=True)
    if rows.size == 0:
        raise ConfigError(f"{effort_csv}: no data rows")
    times = np.atleast_1d(rows["t"])
    effort = hap.EffortSignal(values=np.atleast_1d(rows["effort"]), source="csv")
    waveform = hap.synthesize_am(effort, times, cfg.intensity, cfg.output_sample_rate)
    hap.write_wav(waveform, wav_path)
    return waveform
