/** Writers for the toolkit's interchange formats: the binary feature
 * format (<prefix>.f32 little-endian float32 row-major plus a JSON
 * sidecar {n, d, ids}) and the prediction CSV (id,p0..p{K-1}). */

import * as fs from "fs";
import * as path from "path";

export function writeFeatureFile(
  prefix: string,
  ids: string[],
  values: Float32Array,
  n: number,
  d: number
): void {
  if (values.length !== n * d) {
    throw new Error(`feature payload has ${values.length} values, expected ${n * d}`);
  }
  const dir = path.dirname(prefix);
  if (dir) fs.mkdirSync(dir, { recursive: true });
  // Float32Array is little-endian on every platform node supports.
  fs.writeFileSync(
    `${prefix}.f32`,
    Buffer.from(values.buffer, values.byteOffset, values.byteLength)
  );
  fs.writeFileSync(`${prefix}.json`, JSON.stringify({ n, d, ids }));
}

export function writePredictionCsv(
  outCsv: string,
  ids: string[],
  probs: number[][]
): void {
  const k = probs[0].length;
  const dir = path.dirname(outCsv);
  if (dir) fs.mkdirSync(dir, { recursive: true });
  const header = ["id", ...Array.from({ length: k }, (_, j) => `p${j}`)];
  const lines = [header.join(",")];
  for (let i = 0; i < ids.length; i++) {
    lines.push([ids[i], ...probs[i].map((v) => v.toString())].join(","));
  }
  fs.writeFileSync(outCsv, lines.join("\n") + "\n");
}
