/** Pooled feature extraction from a named intermediate layer. */

import * as tf from "@tensorflow/tfjs";

import { writeFeatureFile } from "./format";
import { decodeFolder } from "./images";
import { batchImages, globalAveragePool, inputSize, layerModel } from "./infer";
import { loadModelFromDir } from "./modelio";

export interface ExtractionJob {
  imageDir: string;
  modelDir: string;
  layerName: string;
  outputPrefix: string;
}

export const DEFAULT_LAYER = "conv2d_93";

export interface ExtractionResult {
  n: number;
  d: number;
  ids: string[];
  skipped: string[];
}

export async function extractFeatures(job: ExtractionJob): Promise<ExtractionResult> {
  const model = await loadModelFromDir(job.modelDir);
  const truncated = layerModel(model, job.layerName);
  // Decode after model/layer validation so a bad layer name writes nothing.
  const { images, skipped } = decodeFolder(job.imageDir);
  const [h, w] = inputSize(model);
  const batch = batchImages(images, h, w);
  const pooled = tf.tidy(() =>
    globalAveragePool(truncated.predict(batch) as tf.Tensor)
  );
  batch.dispose();
  const [n, d] = pooled.shape;
  const values = (await pooled.data()) as Float32Array;
  pooled.dispose();
  const ids = images.map((img) => img.id);
  writeFeatureFile(job.outputPrefix, ids, values, n, d);
  return { n, d, ids, skipped };
}
