#!/usr/bin/env node
/**
 * candidate-gen CLI.
 *
 *   candidate-gen generate --documents docs.jsonl --out candidates.jsonl
 *       [--models mt5_xlsum,mt5_crosssum,...] [--backend stub|transformers]
 *       [--device cpu] [--manifest path]
 *   candidate-gen serve [--port 8799] [--dim 400]
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { HashingEmbedder } from "./embedder.js";
import { generateCandidates } from "./generate.js";
import { MODEL_IDS, type ModelId } from "./schema.js";
import { createApp, serve } from "./server.js";
import { makeSummarizers, type BackendKind } from "./summarizers.js";

function parseModels(value: string): ModelId[] {
  const ids = value.split(",").map((v) => v.trim()).filter(Boolean);
  for (const id of ids) {
    if (!(MODEL_IDS as readonly string[]).includes(id)) {
      throw new Error(`unknown model id ${id}; known: ${MODEL_IDS.join(", ")}`);
    }
  }
  return ids as ModelId[];
}

await yargs(hideBin(process.argv))
  .scriptName("candidate-gen")
  .command(
    "generate",
    "generate the candidates file for a documents corpus",
    (argv) =>
      argv
        .option("documents", { type: "string", demandOption: true })
        .option("out", { type: "string", demandOption: true })
        .option("models", { type: "string", default: MODEL_IDS.join(",") })
        .option("backend", {
          type: "string",
          choices: ["stub", "transformers"] as const,
          default: "stub" as BackendKind,
        })
        .option("device", { type: "string", default: "cpu" })
        .option("manifest", { type: "string" }),
    async (args) => {
      const summarizers = makeSummarizers(
        args.backend as BackendKind,
        parseModels(args.models),
        args.device,
      );
      const manifest = await generateCandidates({
        documentsPath: args.documents,
        outPath: args.out,
        manifestPath: args.manifest ?? `${args.out}.manifest.json`,
        summarizers,
        backend: args.backend,
      });
      console.log(
        `generated ${manifest.generated} documents ` +
          `(${manifest.resumed} resumed, ${manifest.failures.length} model failures)`,
      );
    },
  )
  .command(
    "serve",
    "serve the /embed protocol",
    (argv) =>
      argv
        .option("port", { type: "number", default: 8799 })
        .option("dim", { type: "number", default: 400 }),
    async (args) => {
      const app = createApp({ embedder: new HashingEmbedder(args.dim) });
      await serve(app, args.port);
      console.log(`embedding server listening on http://127.0.0.1:${args.port}`);
    },
  )
  .demandCommand(1)
  .strict()
  .help()
  .parseAsync();
