/**
 * Landmark trace JSON schema shared with the downstream pipeline.
 *
 * This file is the wire contract; the shape must match bit for bit:
 *
 *   { "version": 1, "unit_scale": <float>, "up_axis": "<+y|-y|+z|-z>",
 *     "frame_rate_hint": <float|null>,
 *     "frames": [ { "t": <seconds>,
 *                   "landmarks": { "<name>": {"x","y","z","visibility"} } } ] }
 */
import { LANDMARK_COUNT, POSE_LANDMARK_NAMES } from './landmarks.js';

export const TRACE_VERSION = 1;

export type UpAxis = '+y' | '-y' | '+z' | '-z';

export interface TracePoint {
  x: number;
  y: number;
  z: number;
  visibility: number;
}

export interface TraceFrame {
  t: number;
  landmarks: Record<string, TracePoint>;
}

export interface TraceFile {
  version: typeof TRACE_VERSION;
  unit_scale: number;
  up_axis: UpAxis;
  frame_rate_hint: number | null;
  frames: TraceFrame[];
}

export class TraceValidationError extends Error {}

/** Build a frame from 33 points in estimator index order. */
export function frameFromPoints(tSeconds: number, points: readonly TracePoint[]): TraceFrame {
  if (points.length !== LANDMARK_COUNT) {
    throw new TraceValidationError(
      `expected ${LANDMARK_COUNT} landmarks, got ${points.length}`);
  }
  const landmarks: Record<string, TracePoint> = {};
  POSE_LANDMARK_NAMES.forEach((name, i) => {
    const p = points[i]!;
    landmarks[name] = { x: p.x, y: p.y, z: p.z, visibility: p.visibility };
  });
  return { t: tSeconds, landmarks };
}

export function buildTrace(
  frames: TraceFrame[],
  unitScale: number,
  upAxis: UpAxis,
  frameRateHint: number | null,
): TraceFile {
  const trace: TraceFile = {
    version: TRACE_VERSION,
    unit_scale: unitScale,
    up_axis: upAxis,
    frame_rate_hint: frameRateHint,
    frames,
  };
  validateTrace(trace);
  return trace;
}

/** Enforce the invariants the downstream parser checks. */
export function validateTrace(trace: TraceFile): void {
  if (trace.version !== TRACE_VERSION) {
    throw new TraceValidationError(`unsupported version ${trace.version}`);
  }
  if (!(trace.unit_scale > 0) || !Number.isFinite(trace.unit_scale)) {
    throw new TraceValidationError(`unit_scale must be a positive number, got ${trace.unit_scale}`);
  }
  if (trace.frames.length === 0) {
    throw new TraceValidationError('trace has no frames');
  }
  let prevT = -Infinity;
  trace.frames.forEach((frame, i) => {
    if (!(frame.t >= 0) || !Number.isFinite(frame.t)) {
      throw new TraceValidationError(`frame ${i}: bad timestamp ${frame.t}`);
    }
    if (frame.t <= prevT) {
      throw new TraceValidationError(
        `frame ${i}: timestamp ${frame.t} not greater than previous ${prevT}`);
    }
    prevT = frame.t;
    for (const name of POSE_LANDMARK_NAMES) {
      const p = frame.landmarks[name];
      if (!p) {
        throw new TraceValidationError(`frame ${i}: missing landmark '${name}'`);
      }
      for (const c of [p.x, p.y, p.z] as const) {
        if (!Number.isFinite(c)) {
          throw new TraceValidationError(`frame ${i}: landmark '${name}' has non-finite coordinate`);
        }
      }
      if (!(p.visibility >= 0 && p.visibility <= 1)) {
        throw new TraceValidationError(
          `frame ${i}: landmark '${name}' visibility out of [0, 1]`);
      }
    }
  });
}

export function serializeTrace(trace: TraceFile): string {
  validateTrace(trace);
  return JSON.stringify(trace);
}
