import * as tf from '@tensorflow/tfjs';
import {beforeAll, describe, expect, it} from 'vitest';

import {initBackend} from '../src/train.js';

/** The composite filter-gradient kernel must reproduce the cpu
 * backend's native gradient for every conv configuration the models
 * use (and the strided/padded ones, for safety). */

type Case = [number, 'valid' | 'same'];
const CASES: Case[] = [[1, 'valid'], [1, 'same'], [2, 'valid'], [2, 'same']];

async function convGrads(backend: string): Promise<Float32Array[][]> {
  await tf.setBackend(backend);
  const x = tf.randomNormal([2, 9, 9, 3], 0, 1, 'float32', 11);
  const w = tf.randomNormal([3, 3, 3, 5], 0, 1, 'float32', 12);
  const out: Float32Array[][] = [];
  for (const [stride, pad] of CASES) {
    const loss = (x: tf.Tensor, w: tf.Tensor) =>
        tf.conv2d(x as tf.Tensor4D, w as tf.Tensor4D, stride, pad)
            .square()
            .sum();
    const [dx, dw] = tf.grads(loss)([x, w]);
    out.push([
      (await dx.data()) as Float32Array, (await dw.data()) as Float32Array
    ]);
  }
  return out;
}

describe('wasm conv filter gradient', () => {
  beforeAll(async () => {
    await initBackend('wasm');
    expect(tf.getBackend()).toBe('wasm');
  });

  it('matches the cpu backend on stride and padding variants', async () => {
    const reference = await convGrads('cpu');
    const composite = await convGrads('wasm');
    for (let i = 0; i < CASES.length; i++) {
      for (const which of [0, 1]) {
        const a = reference[i][which];
        const b = composite[i][which];
        expect(b.length).toBe(a.length);
        let worst = 0;
        for (let k = 0; k < a.length; k++) {
          worst = Math.max(worst, Math.abs(a[k] - b[k]));
        }
        expect(worst).toBeLessThan(2e-3);
      }
    }
  });

  it('trains a small conv net end to end on wasm', async () => {
    await tf.setBackend('wasm');
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [8, 8, 1],
          filters: 4,
          kernelSize: [3, 3],
          activation: 'relu',
          kernelInitializer: tf.initializers.glorotUniform({seed: 5}),
        }),
        tf.layers.maxPooling2d({poolSize: [2, 2]}),
        tf.layers.flatten(),
        tf.layers.dense({
          units: 2,
          activation: 'softmax',
          kernelInitializer: tf.initializers.glorotUniform({seed: 6}),
        }),
      ],
    });
    model.compile({optimizer: tf.train.adam(0.05), loss: 'categoricalCrossentropy'});
    // Trivial task: class = bright top half vs bright bottom half.
    const n = 64;
    const xs = tf.buffer([n, 8, 8, 1]);
    const ys = tf.buffer([n, 2]);
    for (let i = 0; i < n; i++) {
      const top = i % 2 === 0;
      for (let r = 0; r < 8; r++) {
        for (let c = 0; c < 8; c++) {
          xs.set(top === r < 4 ? 1 : 0, i, r, c, 0);
        }
      }
      ys.set(1, i, top ? 0 : 1);
    }
    const history = await model.fit(xs.toTensor(), ys.toTensor(), {
      epochs: 12,
      batchSize: 16,
      shuffle: false,
      verbose: 0,
    });
    const losses = history.history['loss'] as number[];
    expect(losses[losses.length - 1]).toBeLessThan(losses[0] * 0.2);
    model.dispose();
  });
});
