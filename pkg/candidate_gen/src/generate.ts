/**
 * Candidates-file generation: read a documents JSONL, run every summarizer
 * on every document, and emit the candidates JSONL the summarank loader
 * consumes, plus a manifest echoing the generation configuration.
 *
 * Resumable: documents already present in the output file are skipped. A
 * model failure on one document is recorded as a missing candidate; the
 * document is skipped only when every model fails.
 */

import { readFile, writeFile, appendFile, mkdir } from "node:fs/promises";
import { existsSync } from "node:fs";
import { dirname } from "node:path";

import {
  CandidatesRecord,
  DocumentRecord,
  GENERATION_CONFIG,
  type GenerationManifest,
} from "./schema.js";
import type { Summarizer } from "./summarizers.js";

export interface GenerateOptions {
  documentsPath: string;
  outPath: string;
  manifestPath: string;
  summarizers: Summarizer[];
  backend: string;
  quiet?: boolean;
}

export async function readDocuments(path: string): Promise<DocumentRecord[]> {
  const raw = await readFile(path, "utf-8");
  const documents: DocumentRecord[] = [];
  for (const [index, line] of raw.split("\n").entries()) {
    if (!line.trim()) continue;
    const parsed = DocumentRecord.safeParse(JSON.parse(line));
    if (!parsed.success) {
      throw new Error(`invalid document at line ${index + 1}: ${parsed.error.message}`);
    }
    documents.push(parsed.data);
  }
  return documents;
}

async function existingIds(outPath: string): Promise<Set<string>> {
  const ids = new Set<string>();
  if (!existsSync(outPath)) return ids;
  const raw = await readFile(outPath, "utf-8");
  for (const line of raw.split("\n")) {
    if (!line.trim()) continue;
    const parsed = CandidatesRecord.safeParse(JSON.parse(line));
    if (parsed.success) ids.add(parsed.data.id);
  }
  return ids;
}

export async function generateCandidates(
  options: GenerateOptions,
): Promise<GenerationManifest> {
  const documents = await readDocuments(options.documentsPath);
  await mkdir(dirname(options.outPath) || ".", { recursive: true });
  const done = await existingIds(options.outPath);

  const manifest: GenerationManifest = {
    generation_config: GENERATION_CONFIG,
    models: options.summarizers.map((s) => s.id),
    backend: options.backend,
    documents: documents.length,
    generated: 0,
    resumed: done.size,
    failures: [],
  };

  for (const doc of documents) {
    if (done.has(doc.id)) continue;
    const candidates: { model: string; summary: string }[] = [];
    for (const summarizer of options.summarizers) {
      try {
        const summary = await summarizer.summarize(doc.text, GENERATION_CONFIG);
        candidates.push({ model: summarizer.id, summary });
      } catch (error) {
        const message = error instanceof Error ? error.message : String(error);
        manifest.failures.push({ id: doc.id, model: summarizer.id, error: message });
        if (!options.quiet) {
          console.warn(`warning: ${summarizer.id} failed on ${doc.id}: ${message}`);
        }
      }
    }
    if (candidates.length === 0) {
      if (!options.quiet) {
        console.warn(`warning: skipping ${doc.id}: every model failed`);
      }
      continue;
    }
    const record = CandidatesRecord.parse({ id: doc.id, candidates });
    await appendFile(options.outPath, JSON.stringify(record) + "\n", "utf-8");
    manifest.generated += 1;
  }

  await mkdir(dirname(options.manifestPath) || ".", { recursive: true });
  await writeFile(
    options.manifestPath,
    JSON.stringify(manifest, null, 2) + "\n",
    "utf-8",
  );
  return manifest;
}
