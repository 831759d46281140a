/**
 * Frame sources. Production input is a video file decoded through ffmpeg;
 * a directory of PPM (P6) images is supported as a dependency-free frame
 * sequence for tests, fixtures, and camera-dump workflows.
 */
import { spawn } from 'node:child_process';
import { readdir, readFile } from 'node:fs/promises';
import path from 'node:path';

import { FrameSource, SourceFrame, VideoDecodeError } from './extract.js';

export interface RawImage {
  data: Uint8ClampedArray;
  width: number;
  height: number;
}

/** Parse a binary P6 PPM file (8-bit RGB). */
export function decodePpm(buffer: Buffer): RawImage {
  // header = magic, width, height, maxval separated by whitespace/comments
  let offset = 0;
  const fields: string[] = [];
  while (fields.length < 4 && offset < buffer.length) {
    let c = String.fromCharCode(buffer[offset]!);
    if (c === '#') {
      while (offset < buffer.length && buffer[offset] !== 0x0a) offset += 1;
      offset += 1;
      continue;
    }
    if (/\s/.test(c)) {
      offset += 1;
      continue;
    }
    let token = '';
    while (offset < buffer.length && !/\s/.test(String.fromCharCode(buffer[offset]!))) {
      token += String.fromCharCode(buffer[offset]!);
      offset += 1;
    }
    fields.push(token);
  }
  if (fields[0] !== 'P6') {
    throw new VideoDecodeError(`not a binary PPM file (magic ${fields[0] ?? 'missing'})`);
  }
  const [width, height, maxval] = [Number(fields[1]), Number(fields[2]), Number(fields[3])];
  if (!(width > 0 && height > 0) || maxval !== 255) {
    throw new VideoDecodeError(`unsupported PPM header ${fields.join(' ')}`);
  }
  offset += 1; // single whitespace after maxval
  const expected = width * height * 3;
  if (buffer.length - offset < expected) {
    throw new VideoDecodeError(`PPM pixel data truncated (${buffer.length - offset} < ${expected})`);
  }
  const rgb = buffer.subarray(offset, offset + expected);
  const rgba = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < width * height; i += 1) {
    rgba[i * 4] = rgb[i * 3]!;
    rgba[i * 4 + 1] = rgb[i * 3 + 1]!;
    rgba[i * 4 + 2] = rgb[i * 3 + 2]!;
    rgba[i * 4 + 3] = 255;
  }
  return { data: rgba, width, height };
}

export function encodePpm(image: RawImage): Buffer {
  const header = Buffer.from(`P6\n${image.width} ${image.height}\n255\n`, 'ascii');
  const rgb = Buffer.alloc(image.width * image.height * 3);
  for (let i = 0; i < image.width * image.height; i += 1) {
    rgb[i * 3] = image.data[i * 4]!;
    rgb[i * 3 + 1] = image.data[i * 4 + 1]!;
    rgb[i * 3 + 2] = image.data[i * 4 + 2]!;
  }
  return Buffer.concat([header, rgb]);
}

/** Frames from a directory of .ppm files, sorted by name, timed at a fixed rate. */
export class PpmDirectorySource implements FrameSource {
  readonly frameRateHint: number;

  constructor(private readonly dir: string, fps = 30) {
    if (!(fps > 0)) throw new RangeError(`fps must be > 0, got ${fps}`);
    this.frameRateHint = fps;
  }

  async *[Symbol.asyncIterator](): AsyncIterator<SourceFrame> {
    const names = (await readdir(this.dir)).filter((n) => n.endsWith('.ppm')).sort();
    if (names.length === 0) {
      throw new VideoDecodeError(`no .ppm frames found in ${this.dir}`);
    }
    for (let index = 0; index < names.length; index += 1) {
      const image = decodePpm(await readFile(path.join(this.dir, names[index]!)));
      yield { image, timestampMs: (index / this.frameRateHint) * 1000, index };
    }
  }
}

const VIDEO_SIZE_RE = /, (\d{2,5})x(\d{2,5})[,\s]/;
const VIDEO_FPS_RE = /, ([\d.]+) fps/;

async function probeVideo(videoPath: string): Promise<{ width: number; height: number; fps: number }> {
  const stderr = await new Promise<string>((resolve, reject) => {
    const proc = spawn('ffmpeg', ['-hide_banner', '-i', videoPath], { stdio: ['ignore', 'ignore', 'pipe'] });
    let out = '';
    proc.stderr.on('data', (chunk) => { out += chunk.toString(); });
    proc.on('error', (err) => reject(new VideoDecodeError(
      `cannot run ffmpeg (${err.message}); install ffmpeg or use a frame directory`)));
    proc.on('close', () => resolve(out));
  });
  const size = VIDEO_SIZE_RE.exec(stderr);
  const fps = VIDEO_FPS_RE.exec(stderr);
  if (!size || !fps) {
    throw new VideoDecodeError(`could not read video stream info from ${videoPath}`);
  }
  return { width: Number(size[1]), height: Number(size[2]), fps: Number(fps[1]) };
}

/** Frames decoded from a video file via an ffmpeg rawvideo pipe. */
export class VideoFileSource implements FrameSource {
  frameRateHint?: number;

  constructor(private readonly videoPath: string, private readonly fpsOverride?: number) {}

  async *[Symbol.asyncIterator](): AsyncIterator<SourceFrame> {
    const info = await probeVideo(this.videoPath);
    const fps = this.fpsOverride ?? info.fps;
    this.frameRateHint = fps;
    const frameBytes = info.width * info.height * 4;

    const proc = spawn('ffmpeg', [
      '-hide_banner', '-loglevel', 'error',
      '-i', this.videoPath,
      '-f', 'rawvideo', '-pix_fmt', 'rgba', 'pipe:1',
    ], { stdio: ['ignore', 'pipe', 'pipe'] });

    let stderr = '';
    proc.stderr.on('data', (chunk) => { stderr += chunk.toString(); });

    let pending: Buffer = Buffer.alloc(0);
    let index = 0;
    for await (const chunk of proc.stdout) {
      pending = pending.length === 0 ? (chunk as Buffer) : Buffer.concat([pending, chunk as Buffer]);
      while (pending.length >= frameBytes) {
        const raw = pending.subarray(0, frameBytes);
        pending = pending.subarray(frameBytes);
        const image: RawImage = {
          data: new Uint8ClampedArray(raw),
          width: info.width,
          height: info.height,
        };
        yield { image, timestampMs: (index / fps) * 1000, index };
        index += 1;
      }
    }
    const code: number = await new Promise((resolve) => proc.on('close', resolve));
    if (code !== 0) {
      throw new VideoDecodeError(`ffmpeg exited with code ${code}: ${stderr.trim()}`);
    }
    if (index === 0) {
      throw new VideoDecodeError(`no frames decoded from ${this.videoPath}`);
    }
  }
}
