import mnist from 'mnist';

import {mulberry32, shuffleInPlace} from './rng.js';

export const IMAGE_DIM = 784;
export const NUM_CLASSES = 10;

export interface Split {
  /** Row-major images, pixels already in [0, 1]. */
  images: Float32Array;
  /** One digit label per image. */
  labels: Uint8Array;
  n: number;
}

export interface DataSet {
  train: Split;
  test: Split;
}

function toSplit(samples: {input: number[]; digit: number}[]): Split {
  const n = samples.length;
  const images = new Float32Array(n * IMAGE_DIM);
  const labels = new Uint8Array(n);
  samples.forEach((s, i) => {
    images.set(s.input, i * IMAGE_DIM);
    labels[i] = s.digit;
  });
  return {images, labels, n};
}

/**
 * Deterministic MNIST split from the bundled per-digit samples: the last
 * `testPerDigit` samples of every digit form the test set, the rest (up
 * to `trainCap` per digit) the training set, shuffled with `seed`.
 *
 * The bundle holds about 1000 samples per digit, so this is a subset of
 * the canonical 60k/10k split; `n_test` in the exported table records
 * the actual size.
 */
export function loadMnist(trainCap: number, testPerDigit: number,
                          seed: number): DataSet {
  const train: {input: number[]; digit: number}[] = [];
  const test: {input: number[]; digit: number}[] = [];
  for (let digit = 0; digit < NUM_CLASSES; digit++) {
    const group = mnist[digit];
    if (testPerDigit >= group.length) {
      throw new Error(
          `testPerDigit=${testPerDigit} leaves no training samples for ` +
          `digit ${digit} (${group.length} available)`);
    }
    const trainN = Math.min(trainCap, group.length - testPerDigit);
    for (const s of group.set(0, trainN - 1)) {
      train.push({input: s.input, digit});
    }
    for (const s of group.set(group.length - testPerDigit,
                              group.length - 1)) {
      test.push({input: s.input, digit});
    }
  }
  shuffleInPlace(train, mulberry32(seed));
  return {train: toSplit(train), test: toSplit(test)};
}

/** One-hot encode labels for the categorical cross-entropy loss. */
export function oneHot(labels: Uint8Array): Float32Array {
  const out = new Float32Array(labels.length * NUM_CLASSES);
  labels.forEach((digit, i) => {
    out[i * NUM_CLASSES + digit] = 1;
  });
  return out;
}
