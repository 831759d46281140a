/**
 * pose-extract: video (or frame directory) -> landmark trace JSON.
 *
 *   pose-extract --video clip.mp4 --out trace.json \
 *       --model pose_landmarker_full.task --wasm ./wasm
 *
 *   pose-extract --frames ./frames --fps 30 --out trace.json --estimator synthetic
 */
import { writeFile } from 'node:fs/promises';
import process from 'node:process';

import { extractTrace, FrameSource, PoseEstimator, NoPersonDetectedError, VideoDecodeError } from './extract.js';
import { PpmDirectorySource, VideoFileSource } from './frames.js';
import { MediapipePoseEstimator } from './mediapipe.js';
import { SyntheticPoseEstimator } from './synthetic.js';
import { serializeTrace, TraceValidationError } from './trace.js';

interface CliOptions {
  video?: string;
  frames?: string;
  out?: string;
  model?: string;
  wasm?: string;
  fps?: number;
  minConfidence: number;
  world: boolean;
  subjectHeight?: number;
  estimator: 'mediapipe' | 'synthetic';
}

const USAGE = `usage: pose-extract (--video <file> | --frames <dir>) --out <file> [options]

options:
  --model <path>            PoseLandmarker .task model bundle (mediapipe mode)
  --wasm <dir>              tasks-vision wasm asset directory (mediapipe mode)
  --fps <hz>                frame rate for --frames input or to override video metadata
  --min-confidence <0..1>   drop frames whose mean landmark visibility is lower (default 0.5)
  --image                   emit normalized image coordinates instead of world meters
  --subject-height <m>      subject height, scales image-coordinate output to meters
  --estimator <name>        mediapipe (default) or synthetic (deterministic test figure)
`;

export function parseArgs(argv: string[]): CliOptions {
  const opts: CliOptions = { minConfidence: 0.5, world: true, estimator: 'mediapipe' };
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i]!;
    const next = () => {
      i += 1;
      const value = argv[i];
      if (value === undefined) throw new RangeError(`${arg} needs a value`);
      return value;
    };
    switch (arg) {
      case '--video': opts.video = next(); break;
      case '--frames': opts.frames = next(); break;
      case '--out': opts.out = next(); break;
      case '--model': opts.model = next(); break;
      case '--wasm': opts.wasm = next(); break;
      case '--fps': opts.fps = Number(next()); break;
      case '--min-confidence': opts.minConfidence = Number(next()); break;
      case '--image': opts.world = false; break;
      case '--subject-height': opts.subjectHeight = Number(next()); break;
      case '--estimator': {
        const value = next();
        if (value !== 'mediapipe' && value !== 'synthetic') {
          throw new RangeError(`unknown estimator '${value}'`);
        }
        opts.estimator = value;
        break;
      }
      case '--help': case '-h':
        process.stdout.write(USAGE);
        process.exit(0);
        break;
      default:
        throw new RangeError(`unknown argument '${arg}'`);
    }
  }
  if (!opts.out) throw new RangeError('--out is required');
  if (!opts.video === !opts.frames) {
    throw new RangeError('exactly one of --video or --frames is required');
  }
  if (opts.fps !== undefined && !(opts.fps > 0)) {
    throw new RangeError('--fps must be a positive number');
  }
  if (!(opts.minConfidence >= 0 && opts.minConfidence <= 1)) {
    throw new RangeError('--min-confidence must be in [0, 1]');
  }
  return opts;
}

function buildSource(opts: CliOptions): FrameSource {
  if (opts.frames) return new PpmDirectorySource(opts.frames, opts.fps ?? 30);
  return new VideoFileSource(opts.video!, opts.fps);
}

function buildEstimator(opts: CliOptions): PoseEstimator {
  if (opts.estimator === 'synthetic') {
    return new SyntheticPoseEstimator({ world: opts.world });
  }
  if (!opts.model || !opts.wasm) {
    throw new RangeError('mediapipe mode needs --model and --wasm');
  }
  return new MediapipePoseEstimator({
    modelAssetPath: opts.model,
    wasmPath: opts.wasm,
    minDetectionConfidence: opts.minConfidence,
  });
}

export async function main(argv: string[]): Promise<number> {
  let opts: CliOptions;
  let estimator: PoseEstimator;
  try {
    opts = parseArgs(argv);
    estimator = buildEstimator(opts);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  try {
    const trace = await extractTrace(buildSource(opts), estimator, {
      minDetectionConfidence: opts.minConfidence,
      worldCoordinates: opts.world,
      subjectHeightM: opts.subjectHeight,
    });
    await writeFile(opts.out!, serializeTrace(trace));
    process.stdout.write(`wrote ${opts.out} (${trace.frames.length} frames)\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    if (err instanceof NoPersonDetectedError || err instanceof TraceValidationError
      || err instanceof RangeError) {
      return 2;
    }
    if (err instanceof VideoDecodeError) return 3;
    return 1;
  } finally {
    await estimator.close?.();
  }
}

const invokedDirectly = process.argv[1]?.endsWith('cli.js')
  || process.argv[1]?.endsWith('cli.ts');
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
