import * as tf from '@tensorflow/tfjs';

/** Noise standard deviation for an SNR in dB, with the average transmit
 * power normalized to 1 per encoder output dimension:
 * sigma^2 = 10^(-SNR_dB / 10). */
export function noiseSigma(snrDb: number): number {
  return Math.sqrt(Math.pow(10, -snrDb / 10));
}

/**
 * The channel between encoder and decoder: scales every sample so its
 * average power per dimension is exactly 1, then adds white Gaussian
 * noise of variance sigma^2.
 *
 * Unlike a regularization noise layer this one is active at evaluation
 * time too; the exported accuracy is the accuracy of classifying what
 * actually crossed the channel. Noise draws are seeded per call from an
 * internal counter, so a run is reproducible end to end.
 */
export class GaussianChannel extends tf.layers.Layer {
  static readonly className = 'GaussianChannel';
  private readonly sigma: number;
  private readonly seed: number;
  private step: number;

  constructor(snrDb: number, seed: number) {
    super({name: `channel_snr_${String(snrDb).replace(/[^0-9a-z]/gi, 'm')}`});
    this.sigma = noiseSigma(snrDb);
    this.seed = seed;
    this.step = 0;
    this.trainable = false;
  }

  override computeOutputShape(inputShape: tf.Shape): tf.Shape {
    return inputShape;
  }

  override call(inputs: tf.Tensor | tf.Tensor[]): tf.Tensor {
    const x = Array.isArray(inputs) ? inputs[0] : inputs;
    return tf.tidy(() => {
      const power = tf.mean(tf.square(x), -1, true);
      const scaled = tf.div(x, tf.sqrt(tf.add(power, 1e-12)));
      if (this.sigma === 0) {
        return scaled;
      }
      this.step += 1;
      const noise = tf.randomNormal(
          x.shape as number[], 0, this.sigma, 'float32',
          this.seed + this.step);
      return tf.add(scaled, noise);
    });
  }
}

tf.serialization.registerClass(GaussianChannel);
