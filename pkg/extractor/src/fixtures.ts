/** Deterministic fixtures: a tiny convolutional model and small PNG
 * images, used by the test suite and by the cross-package contract test. */

import * as fs from "fs";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";
import { PNG } from "pngjs";

import { saveModelToDir } from "./modelio";

/** Deterministic uniform [0, 1) generator (mulberry32). */
export function seededRandom(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Tiny model: 8x8x3 input -> conv "feat_conv" -> pooled -> softmax head
 * of `classCount` units, with seeded deterministic weights. */
export async function writeFixtureModel(
  dir: string,
  classCount = 2,
  seed = 1
): Promise<void> {
  const input = tf.input({ shape: [8, 8, 3] });
  const conv = tf.layers
    .conv2d({ filters: 5, kernelSize: 3, activation: "relu", name: "feat_conv" })
    .apply(input);
  const pooled = tf.layers.globalAveragePooling2d({}).apply(conv);
  const head = tf.layers
    .dense({ units: classCount, activation: "softmax", name: "head" })
    .apply(pooled) as tf.SymbolicTensor;
  const model = tf.model({ inputs: input, outputs: head });
  const rand = seededRandom(seed);
  model.setWeights(
    model.getWeights().map((w) => {
      const values = Float32Array.from({ length: w.size }, () => rand() * 2 - 1);
      return tf.tensor(values, w.shape);
    })
  );
  await saveModelToDir(model, dir);
}

/** Writes `count` seeded random 12x10 RGB PNGs named img_00.png ... */
export function writeFixtureImages(dir: string, count = 8, seed = 7): string[] {
  fs.mkdirSync(dir, { recursive: true });
  const rand = seededRandom(seed);
  const names: string[] = [];
  for (let i = 0; i < count; i++) {
    const png = new PNG({ width: 10, height: 12 });
    for (let p = 0; p < png.width * png.height; p++) {
      png.data[p * 4] = Math.floor(rand() * 256);
      png.data[p * 4 + 1] = Math.floor(rand() * 256);
      png.data[p * 4 + 2] = Math.floor(rand() * 256);
      png.data[p * 4 + 3] = 255;
    }
    const name = `img_${String(i).padStart(2, "0")}.png`;
    fs.writeFileSync(path.join(dir, name), PNG.sync.write(png));
    names.push(name);
  }
  return names;
}
