#!/usr/bin/env node
/** CLI entry point.
 *
 *   extractor extract --images DIR --model DIR [--layer NAME] --out PREFIX
 *   extractor predict --weights DIR --images DIR --out CSV
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { ExtractorError } from "./errors";
import { DEFAULT_LAYER, extractFeatures } from "./extract";
import { predictProbs } from "./predict";

export async function main(argv: string[]): Promise<number> {
  try {
    await yargs(argv)
      .scriptName("extractor")
      .command(
        "extract",
        "Write pooled features from a named model layer",
        (y) =>
          y
            .option("images", { type: "string", demandOption: true })
            .option("model", { type: "string", demandOption: true })
            .option("layer", { type: "string", default: DEFAULT_LAYER })
            .option("out", { type: "string", demandOption: true }),
        async (args) => {
          const result = await extractFeatures({
            imageDir: args.images,
            modelDir: args.model,
            layerName: args.layer,
            outputPrefix: args.out,
          });
          process.stderr.write(
            `wrote ${result.n} x ${result.d} features to ${args.out}.f32` +
              (result.skipped.length ? ` (skipped ${result.skipped.length})` : "") +
              "\n"
          );
        }
      )
      .command(
        "predict",
        "Write a class-probability CSV from a classifier",
        (y) =>
          y
            .option("weights", { type: "string", demandOption: true })
            .option("images", { type: "string", demandOption: true })
            .option("out", { type: "string", demandOption: true }),
        async (args) => {
          const result = await predictProbs(args.weights, args.images, args.out);
          process.stderr.write(
            `wrote ${result.n} rows x ${result.classCount} classes to ${args.out}` +
              (result.skipped.length ? ` (skipped ${result.skipped.length})` : "") +
              "\n"
          );
        }
      )
      .demandCommand(1)
      .strict()
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parseAsync();
    return 0;
  } catch (err) {
    const message = err instanceof Error ? `${err.name}: ${err.message}` : String(err);
    process.stderr.write(`error: ${message}\n`);
    return err instanceof ExtractorError ? 1 : 2;
  }
}

if (require.main === module) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
