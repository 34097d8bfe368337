import * as tf from '@tensorflow/tfjs';

/**
 * The wasm backend ships every kernel this trainer needs except
 * Conv2DBackpropFilter (the gradient of a convolution with respect to
 * its filter), so convolutional encoders cannot train on it out of the
 * box. The gradient is itself a convolution: with the batch and channel
 * axes swapped, convolving the input with the output gradient as the
 * filter (filter taps dilated by the forward stride) yields exactly
 *
 *   dW[kh, kw, ic, oc] =
 *     sum_{b, oh, ow} X[b, oh*s + kh, ow*s + kw, ic] * dY[b, oh, ow, oc]
 *
 * so it can be composed from kernels the backend does have. Registered
 * for NHWC inputs with unit dilation, which covers the models here; the
 * test suite checks it against the cpu backend's native gradient.
 */
export function registerWasmConv2DBackpropFilter(): void {
  const already = tf.getKernelsForBackend('wasm').some(
      (k) => k.kernelName === 'Conv2DBackpropFilter');
  if (already) {
    return;
  }
  tf.registerKernel({
    kernelName: 'Conv2DBackpropFilter',
    backendName: 'wasm',
    kernelFunc: (args) => {
      const x = args.inputs['x'] as tf.Tensor4D;
      const dy = args.inputs['dy'] as tf.Tensor4D;
      const attrs = args.attrs as unknown as {
        strides: [number, number] | number;
        pad: 'valid' | 'same' | number;
        dataFormat: string;
        dimRoundingMode?: 'floor' | 'round' | 'ceil';
        filterShape: [number, number, number, number];
      };
      if (attrs.dataFormat !== 'NHWC') {
        throw new Error(
            `Conv2DBackpropFilter on wasm supports NHWC only, got ` +
            `${attrs.dataFormat}`);
      }
      const info = tf.backend_util.computeConv2DInfo(
          x.shape, attrs.filterShape, attrs.strides, 1 /* dilations */,
          attrs.pad, attrs.dimRoundingMode);
      return tf.tidy(() => {
        const {top, bottom, left, right} = info.padInfo;
        const padded = (top || bottom || left || right) ?
            tf.pad(x, [[0, 0], [top, bottom], [left, right], [0, 0]]) :
            x;
        const lhs = tf.transpose(padded, [3, 1, 2, 0]);
        const rhs = tf.transpose(dy, [1, 2, 0, 3]);
        const grad = tf.conv2d(
            lhs, rhs as unknown as tf.Tensor4D, 1, 'valid', 'NHWC',
            [info.strideHeight, info.strideWidth]);
        return tf.transpose(grad, [1, 2, 0, 3]);
      });
    },
  });
}
