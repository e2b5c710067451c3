import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import {
  EmptyImageDir,
  MissingLayer,
  ShapeMismatch,
  WeightLoadFailure,
} from "../src/errors";
import { extractFeatures } from "../src/extract";
import { writeFixtureImages, writeFixtureModel } from "../src/fixtures";
import { decodeFolder, listImages } from "../src/images";
import { main } from "../src/cli";
import { predictProbs } from "../src/predict";

let root: string;
let modelDir: string;
let model3Dir: string;
let imageDir: string;

beforeAll(async () => {
  root = fs.mkdtempSync(path.join(os.tmpdir(), "extractor-test-"));
  modelDir = path.join(root, "model2");
  model3Dir = path.join(root, "model3");
  imageDir = path.join(root, "images");
  await writeFixtureModel(modelDir, 2);
  await writeFixtureModel(model3Dir, 3, 9);
  writeFixtureImages(imageDir, 8);
});

afterAll(() => {
  fs.rmSync(root, { recursive: true, force: true });
});

function readSidecar(prefix: string): { n: number; d: number; ids: string[] } {
  return JSON.parse(fs.readFileSync(`${prefix}.json`, "utf8"));
}

function parseCsv(file: string): { header: string[]; rows: string[][] } {
  const lines = fs.readFileSync(file, "utf8").trim().split("\n");
  return {
    header: lines[0].split(","),
    rows: lines.slice(1).map((l) => l.split(",")),
  };
}

describe("image listing and decoding", () => {
  it("lists images in sorted order with stem ids", () => {
    const entries = listImages(imageDir);
    expect(entries.map((e) => e.id)).toEqual(
      Array.from({ length: 8 }, (_, i) => `img_${String(i).padStart(2, "0")}`)
    );
  });

  it("raises on an empty folder", () => {
    const empty = path.join(root, "empty");
    fs.mkdirSync(empty, { recursive: true });
    expect(() => listImages(empty)).toThrow(EmptyImageDir);
  });

  it("skips unreadable files with a warning, keeps the rest", () => {
    const mixed = path.join(root, "mixed");
    fs.mkdirSync(mixed, { recursive: true });
    writeFixtureImages(mixed, 3);
    fs.writeFileSync(path.join(mixed, "broken.png"), Buffer.from("not a png"));
    const { images, skipped } = decodeFolder(mixed);
    expect(images.map((i) => i.id)).toEqual(["img_00", "img_01", "img_02"]);
    expect(skipped).toEqual(["broken"]);
  });

  it("raises when nothing decodable remains", () => {
    const allBad = path.join(root, "allbad");
    fs.mkdirSync(allBad, { recursive: true });
    fs.writeFileSync(path.join(allBad, "x.png"), Buffer.from("junk"));
    expect(() => decodeFolder(allBad)).toThrow(EmptyImageDir);
  });
});

describe("extract_features", () => {
  it("writes n=8 pooled vectors with sorted stem ids", async () => {
    const prefix = path.join(root, "out", "features");
    const result = await extractFeatures({
      imageDir,
      modelDir,
      layerName: "feat_conv",
      outputPrefix: prefix,
    });
    expect(result.n).toBe(8);
    expect(result.d).toBe(5);
    const sidecar = readSidecar(prefix);
    expect(sidecar.n).toBe(8);
    expect(sidecar.d).toBe(5);
    expect(sidecar.ids).toEqual(result.ids);
    expect(sidecar.ids).toEqual([...sidecar.ids].sort());
    const payload = fs.readFileSync(`${prefix}.f32`);
    expect(payload.length).toBe(8 * 5 * 4);
    const values = new Float32Array(
      payload.buffer,
      payload.byteOffset,
      payload.length / 4
    );
    for (const v of values) expect(Number.isFinite(v)).toBe(true);
  });

  it("is byte-identical across repeat runs", async () => {
    const a = path.join(root, "rep", "a");
    const b = path.join(root, "rep", "b");
    for (const prefix of [a, b]) {
      await extractFeatures({
        imageDir,
        modelDir,
        layerName: "feat_conv",
        outputPrefix: prefix,
      });
    }
    expect(fs.readFileSync(`${a}.f32`).equals(fs.readFileSync(`${b}.f32`))).toBe(true);
    expect(fs.readFileSync(`${a}.json`).equals(fs.readFileSync(`${b}.json`))).toBe(
      true
    );
  });

  it("raises MissingLayer and writes nothing for a bad layer name", async () => {
    const prefix = path.join(root, "nolayer", "features");
    await expect(
      extractFeatures({
        imageDir,
        modelDir,
        layerName: "conv2d_93",
        outputPrefix: prefix,
      })
    ).rejects.toThrow(MissingLayer);
    expect(fs.existsSync(`${prefix}.f32`)).toBe(false);
    expect(fs.existsSync(`${prefix}.json`)).toBe(false);
  });

  it("raises on an empty image folder without writing files", async () => {
    const empty = path.join(root, "empty2");
    fs.mkdirSync(empty, { recursive: true });
    const prefix = path.join(root, "emptyout", "features");
    await expect(
      extractFeatures({
        imageDir: empty,
        modelDir,
        layerName: "feat_conv",
        outputPrefix: prefix,
      })
    ).rejects.toThrow(EmptyImageDir);
    expect(fs.existsSync(`${prefix}.f32`)).toBe(false);
  });
});

describe("predict_probs", () => {
  it("writes one row per image, each summing to 1 within 1e-6", async () => {
    const out = path.join(root, "preds", "binary.csv");
    const result = await predictProbs(modelDir, imageDir, out);
    expect(result.n).toBe(8);
    expect(result.classCount).toBe(2);
    const { header, rows } = parseCsv(out);
    expect(header).toEqual(["id", "p0", "p1"]);
    expect(rows).toHaveLength(8);
    for (const row of rows) {
      const sum = Number(row[1]) + Number(row[2]);
      expect(Math.abs(sum - 1)).toBeLessThanOrEqual(1e-6);
    }
  });

  it("reads the class count from the model head", async () => {
    const out = path.join(root, "preds", "triple.csv");
    const result = await predictProbs(model3Dir, imageDir, out);
    expect(result.classCount).toBe(3);
    const { header, rows } = parseCsv(out);
    expect(header).toEqual(["id", "p0", "p1", "p2"]);
    for (const row of rows) {
      const sum = Number(row[1]) + Number(row[2]) + Number(row[3]);
      expect(Math.abs(sum - 1)).toBeLessThanOrEqual(1e-6);
    }
  });

  it("is byte-identical across repeat runs", async () => {
    const a = path.join(root, "preds", "rerun_a.csv");
    const b = path.join(root, "preds", "rerun_b.csv");
    await predictProbs(modelDir, imageDir, a);
    await predictProbs(modelDir, imageDir, b);
    expect(fs.readFileSync(a).equals(fs.readFileSync(b))).toBe(true);
  });

  it("raises WeightLoadFailure on corrupt weights", async () => {
    const corrupt = path.join(root, "corrupt");
    fs.mkdirSync(corrupt, { recursive: true });
    fs.writeFileSync(path.join(corrupt, "model.json"), "{not json");
    fs.writeFileSync(path.join(corrupt, "weights.bin"), Buffer.alloc(4));
    await expect(
      predictProbs(corrupt, imageDir, path.join(root, "never.csv"))
    ).rejects.toThrow(WeightLoadFailure);

    const truncated = path.join(root, "truncated");
    fs.mkdirSync(truncated, { recursive: true });
    fs.copyFileSync(
      path.join(modelDir, "model.json"),
      path.join(truncated, "model.json")
    );
    fs.writeFileSync(path.join(truncated, "weights.bin"), Buffer.alloc(8));
    await expect(
      predictProbs(truncated, imageDir, path.join(root, "never.csv"))
    ).rejects.toThrow(WeightLoadFailure);
  });

  it("raises ShapeMismatch when the classifier output is not rank 2", async () => {
    await expect(
      // the truncated-at-conv path produces rank-4 output; reusing the
      // feature model directory as a "classifier" keeps rank 2, so build
      // the mismatch from the conv layer via extract's model instead
      (async () => {
        const tf = await import("@tensorflow/tfjs");
        const { loadModelFromDir, saveModelToDir } = await import("../src/modelio");
        const base = await loadModelFromDir(modelDir);
        const conv = tf.model({
          inputs: base.inputs,
          outputs: base.getLayer("feat_conv").output,
        });
        const convDir = path.join(root, "convmodel");
        await saveModelToDir(conv, convDir);
        await predictProbs(convDir, imageDir, path.join(root, "never2.csv"));
      })()
    ).rejects.toThrow(ShapeMismatch);
  });
});

describe("cli", () => {
  it("extract and predict succeed end to end", async () => {
    const prefix = path.join(root, "cli", "features");
    const csv = path.join(root, "cli", "preds.csv");
    expect(
      await main([
        "extract",
        "--images",
        imageDir,
        "--model",
        modelDir,
        "--layer",
        "feat_conv",
        "--out",
        prefix,
      ])
    ).toBe(0);
    expect(fs.existsSync(`${prefix}.f32`)).toBe(true);
    expect(
      await main(["predict", "--weights", modelDir, "--images", imageDir, "--out", csv])
    ).toBe(0);
    expect(fs.existsSync(csv)).toBe(true);
  });

  it("returns 1 on extractor errors and 2 on usage errors", async () => {
    expect(
      await main([
        "extract",
        "--images",
        imageDir,
        "--model",
        modelDir,
        "--layer",
        "nope",
        "--out",
        path.join(root, "cli", "x"),
      ])
    ).toBe(1);
    expect(await main(["extract", "--images", imageDir])).toBe(2);
  });
});
