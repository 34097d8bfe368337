import * as tf from '@tensorflow/tfjs';
import {setWasmPaths} from '@tensorflow/tfjs-backend-wasm';
import {dirname, join} from 'node:path';
import {fileURLToPath} from 'node:url';

import {DataSet, loadMnist, oneHot, Split} from './data.js';
import {buildModel, DatasetName, inputShape, ModelName} from './models.js';
import {childSeed} from './rng.js';
import {Row} from './table.js';
import {registerWasmConv2DBackpropFilter} from './wasm_conv_grad.js';

export interface TrainSpec {
  dataset: DatasetName;
  model: ModelName;
  ncGrid: number[];
  snrGridDb: number[];
  epochs: number;
  batchSize: number;
  seed: number;
  trainCap: number;
  testPerDigit: number;
}

export const DEFAULTS = {
  ncGrid: [1, 2, 3, 4, 5, 6, 8, 12, 16],
  snrGridDb: [0, 3, 5],
  epochs: 12,
  batchSize: 64,
  seed: 1,
  trainCap: 800,
  testPerDigit: 160,
};

/** Prefer the wasm backend (XNNPACK); fall back to the plain JS cpu
 * backend when it cannot initialize. Returns the active backend name. */
export async function initBackend(preference = 'wasm'): Promise<string> {
  if (preference === 'wasm') {
    const here = dirname(fileURLToPath(import.meta.url));
    setWasmPaths(
        join(here, '..', 'node_modules', '@tensorflow/tfjs-backend-wasm',
             'dist') +
        '/');
    const ok = await tf.setBackend('wasm').catch(() => false);
    if (!ok) {
      await tf.setBackend('cpu');
    } else {
      registerWasmConv2DBackpropFilter();
    }
  } else {
    await tf.setBackend(preference);
  }
  await tf.ready();
  return tf.getBackend();
}

function toTensors(split: Split, dataset: DatasetName, model: ModelName):
    {xs: tf.Tensor; ys: tf.Tensor} {
  const shape = [split.n, ...inputShape(dataset, model)];
  const xs = tf.tensor(split.images, shape as [number, number]);
  const ys = tf.tensor2d(oneHot(split.labels), [split.n, 10]);
  return {xs, ys};
}

export function loadData(spec: TrainSpec): DataSet {
  if (spec.dataset === 'CIFAR10') {
    throw new Error(
        'no CIFAR10 data is bundled in this environment; train MNIST ' +
        'pairs here and use the built-in CIFAR10 presets on the ' +
        'simulation side');
  }
  return loadMnist(spec.trainCap, spec.testPerDigit,
                   childSeed(spec.seed, 'data'));
}

export interface CellResult {
  row: Row;
  seconds: number;
}

/** Train one (n_c, SNR) cell from scratch and measure test accuracy
 * with the channel active. */
export async function trainCell(
    spec: TrainSpec, nc: number, snrDb: number, train: {xs: tf.Tensor; ys: tf.Tensor},
    test: {xs: tf.Tensor; ys: tf.Tensor}): Promise<CellResult> {
  const started = Date.now();
  // Keyed by n_c but not SNR: cells along the SNR axis share init,
  // dropout masks and underlying noise draws (scaled by sigma), so a
  // cleaner channel cannot score worse just because of a reroll.
  const cellSeed = childSeed(spec.seed, `${spec.dataset}/${spec.model}/${nc}`);
  const model = buildModel(spec.dataset, spec.model, nc, snrDb, cellSeed);
  // Shuffling is done once, seeded, when the data is loaded; fit() own
  // shuffling would be unseeded.
  await model.fit(train.xs, train.ys, {
    epochs: spec.epochs,
    batchSize: spec.batchSize,
    shuffle: false,
    verbose: 0,
  });
  const scores =
      model.evaluate(test.xs, test.ys, {batchSize: 400}) as tf.Scalar[];
  const pc = (await scores[1].data())[0];
  tf.dispose(scores);
  model.optimizer?.dispose();
  model.dispose();
  const nTest = test.xs.shape[0] as number;
  return {
    row: {
      dataset: spec.dataset,
      model: spec.model,
      snrDb,
      nc,
      pc: Number(pc.toFixed(6)),
      nTest,
      seed: cellSeed,
    },
    seconds: (Date.now() - started) / 1000,
  };
}

/** Train every cell of the grid, logging one line per cell. */
export async function runGrid(
    spec: TrainSpec,
    log: (line: string) => void = () => {}): Promise<Row[]> {
  const data = loadData(spec);
  const train = toTensors(data.train, spec.dataset, spec.model);
  const test = toTensors(data.test, spec.dataset, spec.model);
  log(`${spec.dataset}/${spec.model}: ${data.train.n} train / ` +
      `${data.test.n} test samples, backend ${tf.getBackend()}`);
  const rows: Row[] = [];
  try {
    for (const snrDb of spec.snrGridDb) {
      for (const nc of spec.ncGrid) {
        const cell = await trainCell(spec, nc, snrDb, train, test);
        rows.push(cell.row);
        log(`${spec.dataset}/${spec.model} snr=${snrDb} n_c=${nc}: ` +
            `p_c=${cell.row.pc.toFixed(4)} (${cell.seconds.toFixed(1)}s)`);
      }
    }
  } finally {
    tf.dispose([train.xs, train.ys, test.xs, test.ys]);
  }
  return rows;
}
