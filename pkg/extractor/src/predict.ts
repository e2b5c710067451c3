/** Class-probability prediction CSVs from a trained classifier. */

import * as tf from "@tensorflow/tfjs";

import { ShapeMismatch } from "./errors";
import { writePredictionCsv } from "./format";
import { decodeFolder } from "./images";
import { batchImages, inputSize } from "./infer";
import { loadModelFromDir } from "./modelio";

export interface PredictionResult {
  n: number;
  classCount: number;
  ids: string[];
  skipped: string[];
}

/** True when the model's output layer already applies a softmax. */
function headIsSoftmax(model: tf.LayersModel): boolean {
  const head = model.layers[model.layers.length - 1];
  const config = head.getConfig() as { activation?: unknown };
  return config.activation === "softmax";
}

export async function predictProbs(
  weightsDir: string,
  imageDir: string,
  outCsv: string
): Promise<PredictionResult> {
  const model = await loadModelFromDir(weightsDir);
  const { images, skipped } = decodeFolder(imageDir);
  const [h, w] = inputSize(model);
  const batch = batchImages(images, h, w);
  const output = tf.tidy(() => {
    const raw = model.predict(batch) as tf.Tensor;
    if (raw.rank !== 2) {
      throw new ShapeMismatch(
        `classifier output has rank ${raw.rank}, need rank 2 (batch, classes)`
      );
    }
    return headIsSoftmax(model) ? raw : tf.softmax(raw as tf.Tensor2D);
  });
  batch.dispose();
  const [n, classCount] = output.shape as [number, number];
  const flat = (await output.data()) as Float32Array;
  output.dispose();
  // Renormalize each row in float64 so sums are 1 to full precision even
  // after the float32 softmax.
  const probs: number[][] = [];
  for (let i = 0; i < n; i++) {
    const row = Array.from(flat.subarray(i * classCount, (i + 1) * classCount));
    const sum = row.reduce((a, b) => a + b, 0);
    probs.push(row.map((v) => v / sum));
  }
  const ids = images.map((img) => img.id);
  writePredictionCsv(outCsv, ids, probs);
  return { n, classCount, ids, skipped };
}
