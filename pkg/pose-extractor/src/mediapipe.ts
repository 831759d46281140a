/**
 * MediaPipe PoseLandmarker adapter. The heavy runtime is loaded lazily so
 * that everything else in this package works without model weights; result
 * mapping is a pure function, tested independently of the runtime.
 */
import { PoseEstimate, PoseEstimator, SourceFrame } from './extract.js';
import { LANDMARK_COUNT } from './landmarks.js';
import { TracePoint } from './trace.js';

export interface MediapipeOptions {
  /** Path or URL of the .task model bundle. */
  modelAssetPath: string;
  /** Directory with the tasks-vision wasm assets. */
  wasmPath: string;
  minDetectionConfidence?: number;
  minTrackingConfidence?: number;
  delegate?: 'CPU' | 'GPU';
}

interface RawLandmark {
  x: number;
  y: number;
  z: number;
  visibility?: number;
}

export interface RawPoseResult {
  landmarks: RawLandmark[][];
  worldLandmarks: RawLandmark[][];
}

function toTracePoints(raw: RawLandmark[]): TracePoint[] {
  return raw.map((p) => ({
    x: p.x,
    y: p.y,
    z: p.z,
    visibility: Math.min(1, Math.max(0, p.visibility ?? 1)),
  }));
}

/** Map one detectForVideo result onto the estimator contract. */
export function mapResult(result: RawPoseResult): PoseEstimate | null {
  const image = result.landmarks[0];
  if (!image || image.length !== LANDMARK_COUNT) {
    return null;
  }
  const world = result.worldLandmarks[0];
  return {
    imageLandmarks: toTracePoints(image),
    worldLandmarks: world && world.length === LANDMARK_COUNT
      ? toTracePoints(world)
      : undefined,
  };
}

export class MediapipePoseEstimator implements PoseEstimator {
  private landmarker: { detectForVideo(image: unknown, t: number): RawPoseResult; close(): void } | null = null;

  constructor(private readonly options: MediapipeOptions) {}

  private async init() {
    if (this.landmarker) return;
    const vision = await import('@mediapipe/tasks-vision');
    const fileset = await vision.FilesetResolver.forVisionTasks(this.options.wasmPath);
    this.landmarker = await vision.PoseLandmarker.createFromOptions(fileset, {
      baseOptions: {
        modelAssetPath: this.options.modelAssetPath,
        delegate: this.options.delegate ?? 'CPU',
      },
      runningMode: 'VIDEO',
      numPoses: 1,
      minPoseDetectionConfidence: this.options.minDetectionConfidence ?? 0.5,
      minTrackingConfidence: this.options.minTrackingConfidence ?? 0.5,
    });
  }

  async estimate(frame: SourceFrame): Promise<PoseEstimate | null> {
    await this.init();
    const result = this.landmarker!.detectForVideo(frame.image, frame.timestampMs);
    return mapResult(result);
  }

  close(): void {
    this.landmarker?.close();
    this.landmarker = null;
  }
}
