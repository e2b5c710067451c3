/** Image folder listing and PNG decoding into [0, 1] RGB float arrays. */

import * as fs from "fs";
import * as path from "path";
import { PNG } from "pngjs";

import { EmptyImageDir, UnreadableImage } from "./errors";

const IMAGE_EXTENSIONS = new Set([".png"]);

export interface ImageEntry {
  /** Filename stem; becomes the sample id in every output file. */
  id: string;
  path: string;
}

export interface DecodedImage {
  id: string;
  height: number;
  width: number;
  /** Row-major [height, width, 3] RGB values scaled to [0, 1]. */
  data: Float32Array;
}

/** Lists image files in deterministic filename-sorted order. */
export function listImages(dir: string): ImageEntry[] {
  let names: string[];
  try {
    names = fs.readdirSync(dir);
  } catch (err) {
    throw new EmptyImageDir(`cannot read image directory ${dir}: ${err}`);
  }
  const entries = names
    .filter((n) => IMAGE_EXTENSIONS.has(path.extname(n).toLowerCase()))
    .sort()
    .map((n) => ({ id: path.basename(n, path.extname(n)), path: path.join(dir, n) }));
  if (entries.length === 0) {
    throw new EmptyImageDir(`no image files found in ${dir}`);
  }
  return entries;
}

/** Decodes one PNG to [0, 1] RGB, dropping any alpha channel. */
export function decodeImage(entry: ImageEntry): DecodedImage {
  let png: PNG;
  try {
    png = PNG.sync.read(fs.readFileSync(entry.path));
  } catch (err) {
    throw new UnreadableImage(`cannot decode ${entry.path}: ${err}`);
  }
  const { width, height, data } = png; // RGBA bytes
  const out = new Float32Array(height * width * 3);
  for (let p = 0; p < height * width; p++) {
    out[p * 3] = data[p * 4] / 255;
    out[p * 3 + 1] = data[p * 4 + 1] / 255;
    out[p * 3 + 2] = data[p * 4 + 2] / 255;
  }
  return { id: entry.id, height, width, data: out };
}

export interface DecodedFolder {
  images: DecodedImage[];
  /** Ids of files that failed to decode and were skipped. */
  skipped: string[];
}

/**
 * Decodes every image in a folder. Unreadable files are skipped with a
 * warning on stderr and recorded; an error is raised only when nothing
 * decodable remains.
 */
export function decodeFolder(dir: string): DecodedFolder {
  const images: DecodedImage[] = [];
  const skipped: string[] = [];
  for (const entry of listImages(dir)) {
    try {
      images.push(decodeImage(entry));
    } catch (err) {
      if (err instanceof UnreadableImage) {
        process.stderr.write(`warning: ${err.message} (skipped)\n`);
        skipped.push(entry.id);
      } else {
        throw err;
      }
    }
  }
  if (images.length === 0) {
    throw new EmptyImageDir(`no decodable images in ${dir}`);
  }
  return { images, skipped };
}
