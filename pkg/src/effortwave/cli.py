"""Command-line entry points.

Subcommands: ``run`` (full pipeline), ``forces`` (stop after dynamics,
CSV-only), ``synth`` (effort CSV -> WAV), ``model check`` (validate a model
override file). Exit codes: 0 success, 2 validation error, 3 I/O error,
4 numerical error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .body_model import load_body_model
from .errors import NumericalError, StageError
from .pipeline import run_forces_only, run_pipeline, synthesize_from_csv

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effortwave",
        description="Estimate joint forces from pose-landmark traces and render "
                    "them as a sense-of-effort vibration waveform.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="log stage progress")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="full pipeline: trace -> WAV + CSVs + plots")
    run_p.add_argument("--trace", required=True, help="landmark trace JSON file")
    run_p.add_argument("--config", required=True, help="pipeline config JSON file")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--source", default=None,
                       help="force source: 'centroid' or a joint name (overrides config)")
    run_p.add_argument("--no-plots", action="store_true", help="skip plot emission")
    # Reserved: the pipeline contains no randomness; the flag takes no value.
    run_p.add_argument("--seed-free", action="store_true", help=argparse.SUPPRESS)

    forces_p = sub.add_parser("forces", help="stop after inverse dynamics; CSVs only")
    forces_p.add_argument("--trace", required=True)
    forces_p.add_argument("--config", required=True)
    forces_p.add_argument("--out", required=True)

    synth_p = sub.add_parser("synth", help="synthesize audio from an effort CSV")
    synth_p.add_argument("--effort", required=True, help="CSV with t,effort columns")
    synth_p.add_argument("--config", required=True)
    synth_p.add_argument("--out", required=True, help="output WAV file path")

    model_p = sub.add_parser("model", help="body model utilities")
    model_sub = model_p.add_subparsers(dest="model_command", required=True)
    check_p = model_sub.add_parser("check", help="validate a model override file")
    check_p.add_argument("--file", required=True, help="model JSON file")

    return parser


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        return _exit_code_for(exc.cause)
    if isinstance(exc, (NumericalError, ArithmeticError)):
        return EXIT_NUMERICAL
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_VALIDATION


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            report = run_pipeline(args.trace, args.config, args.out,
                                  source=args.source, plots=not args.no_plots)
            print(f"wrote {report.outputs['wav']} "
                  f"(peak force {report.peak_force_n:.1f} N at frame {report.peak_force_frame})")
        elif args.command == "forces":
            report = run_forces_only(args.trace, args.config, args.out)
            print(f"wrote {report.outputs['joint_forces_csv']} and {report.outputs['grf_csv']}")
        elif args.command == "synth":
            waveform = synthesize_from_csv(args.effort, args.config, args.out)
            print(f"wrote {args.out} ({len(waveform.samples)} samples "
                  f"at {waveform.sample_rate:.0f} Hz)")
        elif args.command == "model":
            model = load_body_model(args.file)
            print(f"model ok: {len(model.segments)} segments, root {model.root!r}, "
                  f"mass ratio sum {model.total_mass_ratio():.6f}")
    except Exception as exc:  # noqa: BLE001 - single funnel to exit codes
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
