/** Shared inference plumbing: batching decoded images into the tensor
 * shape a model expects, and pooled-feature / probability computation. */

import * as tf from "@tensorflow/tfjs";

import { MissingLayer, ShapeMismatch } from "./errors";
import { DecodedImage } from "./images";

export const DEFAULT_RESIZE: [number, number] = [299, 299];

/** Target spatial size for a model: its declared input height/width,
 * falling back to 299x299 when the model accepts any size. */
export function inputSize(model: tf.LayersModel): [number, number] {
  const shape = model.inputs[0].shape; // [batch, h, w, c]
  if (shape.length !== 4) {
    throw new ShapeMismatch(
      `model expects input of rank ${shape.length}, need rank 4 (batch, h, w, channels)`
    );
  }
  const h = shape[1] ?? DEFAULT_RESIZE[0];
  const w = shape[2] ?? DEFAULT_RESIZE[1];
  return [h, w];
}

/** Stacks decoded images into a [n, h, w, 3] batch, bilinearly resizing
 * each image to the target size. */
export function batchImages(
  images: DecodedImage[],
  height: number,
  width: number
): tf.Tensor4D {
  return tf.tidy(() => {
    const tensors = images.map((img) => {
      const t = tf.tensor3d(img.data, [img.height, img.width, 3]);
      if (img.height === height && img.width === width) return t;
      return tf.image.resizeBilinear(t, [height, width]);
    });
    return tf.stack(tensors) as tf.Tensor4D;
  });
}

/** Model truncated at a named layer's (post-activation) output. */
export function layerModel(model: tf.LayersModel, layerName: string): tf.LayersModel {
  let layer: tf.layers.Layer;
  try {
    layer = model.getLayer(layerName);
  } catch {
    const names = model.layers.map((l) => l.name).join(", ");
    throw new MissingLayer(`layer "${layerName}" not found; model layers: ${names}`);
  }
  return tf.model({ inputs: model.inputs, outputs: layer.output });
}

/** Global average pooling over any spatial axes, yielding [n, d]. */
export function globalAveragePool(activations: tf.Tensor): tf.Tensor2D {
  return tf.tidy(() => {
    if (activations.rank === 2) {
      return activations as tf.Tensor2D;
    }
    const spatialAxes = Array.from(
      { length: activations.rank - 2 },
      (_, i) => i + 1
    );
    return tf.mean(activations, spatialAxes) as tf.Tensor2D;
  });
}
