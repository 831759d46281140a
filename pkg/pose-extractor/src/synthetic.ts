/**
 * Deterministic stand-in estimator: a standing figure bobbing vertically.
 * Used by tests, fixtures, and the `--estimator synthetic` CLI mode, so the
 * whole extraction path runs without model weights or a GPU.
 */
import { LANDMARK_COUNT, POSE_LANDMARK_NAMES } from './landmarks.js';
import { PoseEstimate, PoseEstimator, SourceFrame } from './extract.js';
import { TracePoint } from './trace.js';

// Normalized image coordinates (x right, y down), standing figure centered.
const BASE_IMAGE_POSE: Record<string, [number, number, number]> = {
  nose: [0.50, 0.10, -0.05],
  left_eye_inner: [0.51, 0.09, -0.05], left_eye: [0.52, 0.09, -0.05],
  left_eye_outer: [0.53, 0.09, -0.05],
  right_eye_inner: [0.49, 0.09, -0.05], right_eye: [0.48, 0.09, -0.05],
  right_eye_outer: [0.47, 0.09, -0.05],
  left_ear: [0.54, 0.10, -0.02], right_ear: [0.46, 0.10, -0.02],
  mouth_left: [0.51, 0.12, -0.04], mouth_right: [0.49, 0.12, -0.04],
  left_shoulder: [0.58, 0.22, 0.00], right_shoulder: [0.42, 0.22, 0.00],
  left_elbow: [0.61, 0.35, 0.01], right_elbow: [0.39, 0.35, 0.01],
  left_wrist: [0.62, 0.47, 0.03], right_wrist: [0.38, 0.47, 0.03],
  left_pinky: [0.63, 0.51, 0.04], right_pinky: [0.37, 0.51, 0.04],
  left_index: [0.625, 0.515, 0.045], right_index: [0.375, 0.515, 0.045],
  left_thumb: [0.615, 0.505, 0.04], right_thumb: [0.385, 0.505, 0.04],
  left_hip: [0.545, 0.52, 0.00], right_hip: [0.455, 0.52, 0.00],
  left_knee: [0.55, 0.70, 0.01], right_knee: [0.45, 0.70, 0.01],
  left_ankle: [0.555, 0.88, 0.00], right_ankle: [0.445, 0.88, 0.00],
  left_heel: [0.555, 0.91, -0.02], right_heel: [0.445, 0.91, -0.02],
  left_foot_index: [0.56, 0.92, 0.06], right_foot_index: [0.44, 0.92, 0.06],
};

export interface SyntheticOptions {
  /** Vertical bob amplitude in normalized image units. */
  bobAmplitude?: number;
  bobFrequencyHz?: number;
  /** Emit metric world landmarks alongside image landmarks. */
  world?: boolean;
  /** Frame indices the estimator pretends to lose the person in. */
  dropFrames?: Set<number>;
  /** Always report no person (for error-path tests). */
  blind?: boolean;
  /** Approximate subject height in meters for the world variant. */
  subjectHeightM?: number;
}

export class SyntheticPoseEstimator implements PoseEstimator {
  private readonly opts: Required<Omit<SyntheticOptions, 'dropFrames'>> & {
    dropFrames: Set<number>;
  };

  constructor(options: SyntheticOptions = {}) {
    this.opts = {
      bobAmplitude: options.bobAmplitude ?? 0.03,
      bobFrequencyHz: options.bobFrequencyHz ?? 1.0,
      world: options.world ?? true,
      blind: options.blind ?? false,
      subjectHeightM: options.subjectHeightM ?? 1.7,
      dropFrames: options.dropFrames ?? new Set(),
    };
  }

  async estimate(frame: SourceFrame): Promise<PoseEstimate | null> {
    if (this.opts.blind || this.opts.dropFrames.has(frame.index)) {
      return null;
    }
    const t = frame.timestampMs / 1000;
    const dy = this.opts.bobAmplitude
      * Math.sin(2 * Math.PI * this.opts.bobFrequencyHz * t);

    const imageLandmarks: TracePoint[] = [];
    const worldLandmarks: TracePoint[] = [];
    // Image y spans roughly [0.09, 0.92] for the figure; world coordinates
    // scale that span to the subject height, origin at the hip midpoint.
    const span = 0.83;
    const scale = this.opts.subjectHeightM / span;
    const hipY = 0.52;
    for (const name of POSE_LANDMARK_NAMES) {
      const [x, y, z] = BASE_IMAGE_POSE[name]!;
      const bobbedY = y + dy;
      imageLandmarks.push({ x, y: bobbedY, z, visibility: 1 });
      worldLandmarks.push({
        x: (x - 0.5) * scale,
        y: (bobbedY - hipY) * scale,
        z: z * scale,
        visibility: 1,
      });
    }
    if (imageLandmarks.length !== LANDMARK_COUNT) {
      throw new Error('synthetic pose table out of sync with landmark list');
    }
    return this.opts.world
      ? { imageLandmarks, worldLandmarks }
      : { imageLandmarks };
  }
}
