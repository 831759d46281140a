/**
 * Regenerate the checked-in sample frame sequence (fixtures/frames).
 * Twelve tiny frames with a drifting gradient and a moving bright block,
 * enough to stand in for a decoded video clip in tests and samples.
 */
import { mkdir, writeFile } from 'node:fs/promises';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

import { encodePpm, RawImage } from '../src/frames.js';

const WIDTH = 64;
const HEIGHT = 48;
const FRAMES = 12;

function renderFrame(index: number): RawImage {
  const data = new Uint8ClampedArray(WIDTH * HEIGHT * 4);
  for (let y = 0; y < HEIGHT; y += 1) {
    for (let x = 0; x < WIDTH; x += 1) {
      const i = (y * WIDTH + x) * 4;
      data[i] = (x * 4 + index * 16) % 256;
      data[i + 1] = (y * 5) % 256;
      data[i + 2] = (x + y + index * 8) % 256;
      data[i + 3] = 255;
    }
  }
  // bright moving block as a stand-in subject
  const bx = 8 + index * 4;
  for (let y = 16; y < 32; y += 1) {
    for (let x = bx; x < Math.min(bx + 10, WIDTH); x += 1) {
      const i = (y * WIDTH + x) * 4;
      data[i] = 240;
      data[i + 1] = 240;
      data[i + 2] = 240;
    }
  }
  return { data, width: WIDTH, height: HEIGHT };
}

async function main() {
  const dir = path.join(path.dirname(fileURLToPath(import.meta.url)), '..', 'fixtures', 'frames');
  await mkdir(dir, { recursive: true });
  for (let i = 0; i < FRAMES; i += 1) {
    const name = `frame_${String(i).padStart(3, '0')}.ppm`;
    await writeFile(path.join(dir, name), encodePpm(renderFrame(i)));
  }
  process.stdout.write(`wrote ${FRAMES} frames to ${dir}\n`);
}

main();
