import { mkdtemp, readFile } from 'node:fs/promises';
import { tmpdir } from 'node:os';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

import { describe, expect, it } from 'vitest';

import { main, parseArgs } from '../src/cli.js';
import { validateTrace } from '../src/trace.js';

const ROOT = path.join(path.dirname(fileURLToPath(import.meta.url)), '..');
const FRAMES_DIR = path.join(ROOT, 'fixtures', 'frames');

describe('parseArgs', () => {
  it('parses the synthetic frame-directory form', () => {
    const opts = parseArgs(['--frames', 'dir', '--out', 'x.json',
      '--estimator', 'synthetic', '--fps', '25']);
    expect(opts.frames).toBe('dir');
    expect(opts.fps).toBe(25);
    expect(opts.estimator).toBe('synthetic');
    expect(opts.world).toBe(true);
  });

  it('requires exactly one input', () => {
    expect(() => parseArgs(['--out', 'x.json'])).toThrow(/exactly one/);
    expect(() => parseArgs(['--video', 'a', '--frames', 'b', '--out', 'x']))
      .toThrow(/exactly one/);
  });

  it('requires --out and validates ranges', () => {
    expect(() => parseArgs(['--frames', 'dir'])).toThrow(/--out/);
    expect(() => parseArgs(['--frames', 'd', '--out', 'x', '--fps', '-1']))
      .toThrow(/--fps/);
    expect(() => parseArgs(['--frames', 'd', '--out', 'x', '--min-confidence', '2']))
      .toThrow(/--min-confidence/);
    expect(() => parseArgs(['--bogus'])).toThrow(/unknown argument/);
  });

  it('mediapipe mode needs model and wasm paths', async () => {
    const code = await main(['--frames', FRAMES_DIR, '--out', '/tmp/x.json']);
    expect(code).toBe(2);
  });
});

describe('main', () => {
  it('extracts the fixture frames to a valid trace file', async () => {
    const dir = await mkdtemp(path.join(tmpdir(), 'pose-cli-'));
    const out = path.join(dir, 'trace.json');
    const code = await main(['--frames', FRAMES_DIR, '--out', out,
      '--estimator', 'synthetic']);
    expect(code).toBe(0);
    const trace = JSON.parse(await readFile(out, 'utf8'));
    validateTrace(trace);
    expect(trace.frames.length).toBeGreaterThanOrEqual(10);
    expect(trace.up_axis).toBe('-y');
  });

  it('returns 3 for an undecodable input directory', async () => {
    const dir = await mkdtemp(path.join(tmpdir(), 'pose-cli-empty-'));
    const code = await main(['--frames', dir, '--out', path.join(dir, 'x.json'),
      '--estimator', 'synthetic']);
    expect(code).toBe(3);
  });
});
