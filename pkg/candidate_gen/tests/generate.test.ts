import { execFile } from "node:child_process";
import { mkdtemp, readFile, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { beforeAll, describe, expect, it } from "vitest";

import { generateCandidates } from "../src/generate.js";
import { CandidatesRecord, GENERATION_CONFIG, MODEL_IDS } from "../src/schema.js";
import { makeSummarizers } from "../src/summarizers.js";

const execFileAsync = promisify(execFile);
const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));
const DOCS = join(FIXTURES, "docs_sample.jsonl");

async function generateInto(dir: string) {
  return generateCandidates({
    documentsPath: DOCS,
    outPath: join(dir, "candidates.jsonl"),
    manifestPath: join(dir, "manifest.json"),
    summarizers: makeSummarizers("stub", [...MODEL_IDS]),
    backend: "stub",
    quiet: true,
  });
}

describe("generateCandidates", () => {
  let dir: string;

  beforeAll(async () => {
    dir = await mkdtemp(join(tmpdir(), "candgen-"));
    await generateInto(dir);
  });

  it("emits one schema-valid line per document with one candidate per model", async () => {
    const raw = await readFile(join(dir, "candidates.jsonl"), "utf-8");
    const lines = raw.trim().split("\n");
    expect(lines).toHaveLength(5);
    for (const line of lines) {
      const record = CandidatesRecord.parse(JSON.parse(line));
      expect(record.candidates.map((c) => c.model)).toEqual([...MODEL_IDS]);
    }
  });

  it("extractive stub output is a sentence of the source text", async () => {
    const raw = await readFile(join(dir, "candidates.jsonl"), "utf-8");
    const docs = (await readFile(DOCS, "utf-8")).trim().split("\n").map(
      (line) => JSON.parse(line) as { id: string; text: string },
    );
    for (const line of raw.trim().split("\n")) {
      const record = CandidatesRecord.parse(JSON.parse(line));
      const doc = docs.find((d) => d.id === record.id)!;
      const extractive = record.candidates.find(
        (c) => c.model === "scibert_uncased",
      )!;
      expect(doc.text).toContain(extractive.summary);
    }
  });

  it("manifest echoes the decoding configuration exactly", async () => {
    const manifest = JSON.parse(await readFile(join(dir, "manifest.json"), "utf-8"));
    expect(manifest.generation_config).toEqual({
      max_input_tokens: 512,
      min_output_tokens: 64,
      max_output_tokens: 400,
      beam_size: 4,
      no_repeat_ngram_size: 2,
    });
    expect(manifest.generation_config).toEqual(GENERATION_CONFIG);
    expect(manifest.models).toEqual([...MODEL_IDS]);
    expect(manifest.generated).toBe(5);
  });

  it("round-trips through the summarank loader with zero skips", async () => {
    const { stdout, stderr } = await execFileAsync("python3", [
      "-m",
      "summarank.cli",
      "rank",
      "--documents",
      DOCS,
      "--candidates",
      join(dir, "candidates.jsonl"),
      "--format",
      "json",
    ]);
    expect(stderr).not.toMatch(/skipped|excluded/);
    const records = stdout.trim().split("\n").map((line) => JSON.parse(line));
    expect(records).toHaveLength(5);
    for (const record of records) {
      expect(record.models).toEqual([...MODEL_IDS]);
      expect(MODEL_IDS).toContain(record.best_model);
    }
  });

  it("resumes instead of regenerating existing documents", async () => {
    const before = await readFile(join(dir, "candidates.jsonl"), "utf-8");
    const manifest = await generateInto(dir);
    expect(manifest.resumed).toBe(5);
    expect(manifest.generated).toBe(0);
    expect(await readFile(join(dir, "candidates.jsonl"), "utf-8")).toBe(before);
  });

  it("records per-model failures and skips a document only when all fail", async () => {
    const failDir = await mkdtemp(join(tmpdir(), "candgen-fail-"));
    const docs = join(failDir, "docs.jsonl");
    // "???" normalizes to no sentences: every stub model fails on it
    await writeFile(
      docs,
      [
        JSON.stringify({ id: "ok", text: "ক খ গ। ঘ ঙ চ।", summary: "ক খ" }),
        JSON.stringify({ id: "broken", text: "???", summary: "ক খ" }),
      ].join("\n") + "\n",
      "utf-8",
    );
    const manifest = await generateCandidates({
      documentsPath: docs,
      outPath: join(failDir, "candidates.jsonl"),
      manifestPath: join(failDir, "manifest.json"),
      summarizers: makeSummarizers("stub", [...MODEL_IDS]),
      backend: "stub",
      quiet: true,
    });
    expect(manifest.generated).toBe(1);
    expect(manifest.failures).toHaveLength(MODEL_IDS.length);
    expect(manifest.failures.every((f) => f.id === "broken")).toBe(true);
    const raw = await readFile(join(failDir, "candidates.jsonl"), "utf-8");
    expect(raw.trim().split("\n")).toHaveLength(1);
  });
});
