export { POSE_LANDMARK_NAMES, LANDMARK_COUNT } from './landmarks.js';
export {
  TRACE_VERSION,
  TraceValidationError,
  buildTrace,
  frameFromPoints,
  serializeTrace,
  validateTrace,
} from './trace.js';
export type { TraceFile, TraceFrame, TracePoint, UpAxis } from './trace.js';
export {
  NoPersonDetectedError,
  VideoDecodeError,
  extractTrace,
} from './extract.js';
export type {
  ExtractionOptions,
  FrameSource,
  PoseEstimate,
  PoseEstimator,
  SourceFrame,
} from './extract.js';
export { PpmDirectorySource, VideoFileSource, decodePpm, encodePpm } from './frames.js';
export type { RawImage } from './frames.js';
export { MediapipePoseEstimator, mapResult } from './mediapipe.js';
export type { MediapipeOptions, RawPoseResult } from './mediapipe.js';
export { SyntheticPoseEstimator } from './synthetic.js';
export type { SyntheticOptions } from './synthetic.js';
