/**
 * Regenerate fixtures/sample_trace.json: run the extraction pipeline over
 * the checked-in frame sequence with the deterministic estimator. The file
 * is the cross-component contract sample consumed by the downstream
 * pipeline's test suite.
 */
import { writeFile } from 'node:fs/promises';
import path from 'node:path';
import { fileURLToPath } from 'node:url';

import { extractTrace } from '../src/extract.js';
import { PpmDirectorySource } from '../src/frames.js';
import { SyntheticPoseEstimator } from '../src/synthetic.js';
import { serializeTrace } from '../src/trace.js';

async function main() {
  const root = path.join(path.dirname(fileURLToPath(import.meta.url)), '..');
  const source = new PpmDirectorySource(path.join(root, 'fixtures', 'frames'), 30);
  const estimator = new SyntheticPoseEstimator({ world: true });
  const trace = await extractTrace(source, estimator, { worldCoordinates: true });
  const out = path.join(root, 'fixtures', 'sample_trace.json');
  await writeFile(out, serializeTrace(trace));
  process.stdout.write(`wrote ${out} (${trace.frames.length} frames)\n`);
}

main();
