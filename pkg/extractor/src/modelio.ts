/** Save/load tfjs LayersModels as a two-file directory: model.json
 * (topology + weight specs) and weights.bin (raw weight bytes). */

import * as fs from "fs";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";

import { WeightLoadFailure } from "./errors";

const MODEL_JSON = "model.json";
const WEIGHTS_BIN = "weights.bin";

export async function saveModelToDir(
  model: tf.LayersModel,
  dir: string
): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      const { weightData, ...rest } = artifacts;
      fs.writeFileSync(path.join(dir, MODEL_JSON), JSON.stringify(rest));
      const raw = weightData as ArrayBuffer;
      fs.writeFileSync(path.join(dir, WEIGHTS_BIN), Buffer.from(raw));
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: "JSON",
        },
      };
    })
  );
}

export async function loadModelFromDir(dir: string): Promise<tf.LayersModel> {
  let artifacts: tf.io.ModelArtifacts;
  try {
    const rest = JSON.parse(
      fs.readFileSync(path.join(dir, MODEL_JSON), "utf8")
    );
    const raw = fs.readFileSync(path.join(dir, WEIGHTS_BIN));
    const weightData = raw.buffer.slice(
      raw.byteOffset,
      raw.byteOffset + raw.byteLength
    );
    artifacts = { ...rest, weightData };
  } catch (err) {
    throw new WeightLoadFailure(`cannot read model files in ${dir}: ${err}`);
  }
  try {
    return await tf.loadLayersModel(tf.io.fromMemory(artifacts));
  } catch (err) {
    throw new WeightLoadFailure(`cannot load model from ${dir}: ${err}`);
  }
}
