import * as tf from '@tensorflow/tfjs';

import {GaussianChannel} from './channel.js';
import {childSeed} from './rng.js';

export type DatasetName = 'MNIST' | 'CIFAR10';
export type ModelName = 'FNN' | 'CNN';

export const PAIRS: ReadonlyArray<readonly [DatasetName, ModelName]> = [
  ['MNIST', 'FNN'],
  ['MNIST', 'CNN'],
  ['CIFAR10', 'CNN'],
];

export function inputShape(dataset: DatasetName,
                           model: ModelName): number[] {
  if (dataset === 'MNIST') {
    return model === 'FNN' ? [784] : [28, 28, 1];
  }
  return [32, 32, 3];
}

function denseEncoder(x: tf.SymbolicTensor, nc: number,
                      seed: number): tf.SymbolicTensor {
  const hidden = tf.layers.dense({
    units: 784, activation: 'relu',
    kernelInitializer: tf.initializers.glorotUniform({seed: seed + 1}),
  }).apply(x) as tf.SymbolicTensor;
  return tf.layers.dense({
    units: nc, activation: 'linear', name: 'symbols',
    kernelInitializer: tf.initializers.glorotUniform({seed: seed + 2}),
  }).apply(hidden) as tf.SymbolicTensor;
}

function convEncoder(x: tf.SymbolicTensor, nc: number,
                     seed: number): tf.SymbolicTensor {
  let h = x;
  const conv = (filters: number, s: number) => {
    h = tf.layers.conv2d({
      filters, kernelSize: [3, 3], activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({seed: seed + s}),
    }).apply(h) as tf.SymbolicTensor;
  };
  conv(32, 1);
  h = tf.layers.maxPooling2d({poolSize: [2, 2]}).apply(h) as
      tf.SymbolicTensor;
  conv(64, 2);
  h = tf.layers.maxPooling2d({poolSize: [2, 2]}).apply(h) as
      tf.SymbolicTensor;
  h = tf.layers.flatten().apply(h) as tf.SymbolicTensor;
  h = tf.layers.dropout({rate: 0.5, seed: seed + 3}).apply(h) as
      tf.SymbolicTensor;
  return tf.layers.dense({
    units: nc, activation: 'linear', name: 'symbols',
    kernelInitializer: tf.initializers.glorotUniform({seed: seed + 4}),
  }).apply(h) as tf.SymbolicTensor;
}

function wideConvEncoder(x: tf.SymbolicTensor, nc: number,
                         seed: number): tf.SymbolicTensor {
  let h = x;
  let s = 0;
  const conv = (filters: number) => {
    s += 1;
    h = tf.layers.conv2d({
      filters, kernelSize: [3, 3], activation: 'relu',
      kernelInitializer: tf.initializers.glorotUniform({seed: seed + s}),
    }).apply(h) as tf.SymbolicTensor;
  };
  const poolAndDrop = () => {
    s += 1;
    h = tf.layers.maxPooling2d({poolSize: [2, 2]}).apply(h) as
        tf.SymbolicTensor;
    h = tf.layers.dropout({rate: 0.25, seed: seed + s}).apply(h) as
        tf.SymbolicTensor;
  };
  conv(32);
  conv(32);
  poolAndDrop();
  conv(64);
  conv(64);
  poolAndDrop();
  h = tf.layers.flatten().apply(h) as tf.SymbolicTensor;
  s += 1;
  h = tf.layers.dense({
    units: 512, activation: 'relu',
    kernelInitializer: tf.initializers.glorotUniform({seed: seed + s}),
  }).apply(h) as tf.SymbolicTensor;
  s += 1;
  h = tf.layers.dropout({rate: 0.25, seed: seed + s}).apply(h) as
      tf.SymbolicTensor;
  s += 1;
  return tf.layers.dense({
    units: nc, activation: 'linear', name: 'symbols',
    kernelInitializer: tf.initializers.glorotUniform({seed: seed + s}),
  }).apply(h) as tf.SymbolicTensor;
}

/**
 * Encoder, channel and decoder as one trainable model.
 *
 * The encoder compresses an image into `nc` real symbols (one per
 * channel use), the channel power-normalizes them and adds Gaussian
 * noise for the given SNR, and the decoder classifies the received
 * symbols into 10 classes. Categorical cross-entropy, Adam.
 */
export function buildModel(dataset: DatasetName, model: ModelName,
                           nc: number, snrDb: number,
                           seed: number): tf.LayersModel {
  if (dataset === 'CIFAR10' && model === 'FNN') {
    throw new Error(
        'FNN/CIFAR10 is not supported: the dense encoder cannot reach ' +
        'usable accuracy on CIFAR10, use CNN instead');
  }
  if (nc < 1 || !Number.isInteger(nc)) {
    throw new Error(`n_c must be a positive integer, got ${nc}`);
  }
  const input = tf.input({shape: inputShape(dataset, model)});
  let symbols: tf.SymbolicTensor;
  if (model === 'FNN') {
    symbols = denseEncoder(input, nc, childSeed(seed, 'encoder'));
  } else if (dataset === 'MNIST') {
    symbols = convEncoder(input, nc, childSeed(seed, 'encoder'));
  } else {
    symbols = wideConvEncoder(input, nc, childSeed(seed, 'encoder'));
  }
  const received = new GaussianChannel(snrDb, childSeed(seed, 'channel'))
                       .apply(symbols) as tf.SymbolicTensor;
  const decSeed = childSeed(seed, 'decoder');
  const hidden = tf.layers.dense({
    units: nc, activation: 'relu',
    kernelInitializer: tf.initializers.glorotUniform({seed: decSeed + 1}),
  }).apply(received) as tf.SymbolicTensor;
  const probs = tf.layers.dense({
    units: 10, activation: 'softmax',
    kernelInitializer: tf.initializers.glorotUniform({seed: decSeed + 2}),
  }).apply(hidden) as tf.SymbolicTensor;

  const net = tf.model({inputs: input, outputs: probs});
  net.compile({
    optimizer: tf.train.adam(),
    loss: 'categoricalCrossentropy',
    metrics: ['accuracy'],
  });
  return net;
}
