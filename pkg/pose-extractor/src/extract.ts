/**
 * Core extraction loop: pull frames from a source, run the pose estimator,
 * and assemble the trace file. Frames without a confident detection are
 * omitted (the downstream resampler bridges gaps); a clip with zero
 * detections is an error.
 */
import { LANDMARK_COUNT } from './landmarks.js';
import { buildTrace, frameFromPoints, TraceFile, TraceFrame, TracePoint } from './trace.js';

/** One estimated pose: 33 points, normalized image coords plus optional metric world coords. */
export interface PoseEstimate {
  /** x, y normalized to image size, z roughly same scale, y down. */
  imageLandmarks: TracePoint[];
  /** Meters, origin mid-hip, y down; present when the estimator provides them. */
  worldLandmarks?: TracePoint[];
}

export interface PoseEstimator {
  /** Return null when no person is detected in the frame. */
  estimate(frame: SourceFrame): Promise<PoseEstimate | null>;
  close?(): Promise<void> | void;
}

export interface SourceFrame {
  /** Opaque image payload; the estimator implementation knows its shape. */
  image: unknown;
  timestampMs: number;
  index: number;
}

export interface FrameSource extends AsyncIterable<SourceFrame> {
  /** Nominal frame rate when the container declares one. */
  frameRateHint?: number;
}

export interface ExtractionOptions {
  minDetectionConfidence?: number;
  /** Prefer metric world landmarks when the estimator supplies them. */
  worldCoordinates?: boolean;
  /** Subject height in meters; scales normalized-image fallback output. */
  subjectHeightM?: number;
  onWarning?: (message: string) => void;
}

export class NoPersonDetectedError extends Error {
  constructor() {
    super('no person detected in any frame; nothing to extract');
  }
}

export class VideoDecodeError extends Error {}

interface DetectedFrame {
  tSeconds: number;
  points: TracePoint[];
  usedWorld: boolean;
}

function meanVisibility(points: TracePoint[]): number {
  return points.reduce((acc, p) => acc + p.visibility, 0) / points.length;
}

/**
 * Normalized-image traces carry no absolute scale. Estimate the subject's
 * vertical extent in the first detected frame and scale so that it matches
 * the supplied height in meters.
 */
function imageUnitScale(first: DetectedFrame, subjectHeightM: number | undefined,
                        warn: (msg: string) => void): number {
  if (subjectHeightM === undefined) {
    warn('no subject height supplied; image-normalized output keeps unit_scale 1 '
      + '(coordinates stay in image units)');
    return 1;
  }
  const ys = first.points.map((p) => p.y);
  const span = Math.max(...ys) - Math.min(...ys);
  if (!(span > 0)) {
    warn('degenerate pose extent; keeping unit_scale 1');
    return 1;
  }
  return subjectHeightM / span;
}

export async function extractTrace(
  source: FrameSource,
  estimator: PoseEstimator,
  options: ExtractionOptions = {},
): Promise<TraceFile> {
  const warn = options.onWarning ?? ((msg: string) => console.warn(`[pose-extract] ${msg}`));
  const minConfidence = options.minDetectionConfidence ?? 0.5;
  if (minConfidence < 0 || minConfidence > 1) {
    throw new RangeError(`minDetectionConfidence must be in [0, 1], got ${minConfidence}`);
  }
  const preferWorld = options.worldCoordinates ?? true;

  const detected: DetectedFrame[] = [];
  let gapOpen = false;
  let lastT = -Infinity;
  // Locked by the first confident detection so all frames share one unit.
  let useWorld: boolean | null = null;

  const skip = (frame: SourceFrame, reason: string) => {
    if (!gapOpen) {
      warn(`${reason} at frame ${frame.index} `
        + `(t=${(frame.timestampMs / 1000).toFixed(3)}s); omitting`);
      gapOpen = true;
    }
  };

  for await (const frame of source) {
    const estimate = await estimator.estimate(frame);
    if (estimate === null) {
      skip(frame, 'no detection');
      continue;
    }
    if (useWorld === null) {
      useWorld = preferWorld && estimate.worldLandmarks !== undefined;
    }
    const points = useWorld ? estimate.worldLandmarks : estimate.imageLandmarks;
    if (!points) {
      skip(frame, 'missing world landmarks');
      continue;
    }
    if (meanVisibility(points) < minConfidence) {
      skip(frame, 'low-confidence detection');
      continue;
    }
    gapOpen = false;
    if (points.length !== LANDMARK_COUNT) {
      throw new VideoDecodeError(
        `estimator returned ${points.length} landmarks at frame ${frame.index}`);
    }
    const tSeconds = frame.timestampMs / 1000;
    if (tSeconds <= lastT) {
      warn(`non-increasing timestamp at frame ${frame.index}; dropping frame`);
      continue;
    }
    lastT = tSeconds;
    detected.push({ tSeconds, points, usedWorld: useWorld });
  }

  if (detected.length === 0) {
    throw new NoPersonDetectedError();
  }

  const unitScale = useWorld
    ? 1
    : imageUnitScale(detected[0]!, options.subjectHeightM, warn);
  // Both the estimator's image and world coordinates are y-down.
  const frames: TraceFrame[] = detected.map((d) => frameFromPoints(d.tSeconds, d.points));
  return buildTrace(frames, unitScale, '-y', source.frameRateHint ?? null);
}
