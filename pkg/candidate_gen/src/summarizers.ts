/**
 * Summarizer backends.
 *
 * The `transformers` backend runs the four pre-trained checkpoints through
 * @xenova/transformers (installed separately; models download on first
 * use). The `stub` backend is a deterministic, dependency-free stand-in so
 * the candidates-file schema and the downstream pipeline can be exercised
 * offline: each model id maps to a different extractive heuristic.
 */

import {
  GENERATION_CONFIG,
  MODEL_CHECKPOINTS,
  type GenerationConfig,
  type ModelId,
} from "./schema.js";

export interface Summarizer {
  readonly id: string;
  summarize(text: string, config: GenerationConfig): Promise<string>;
}

/** Split on Bengali danda / ASCII sentence terminators, keeping order. */
export function splitSentences(text: string): string[] {
  return text
    .split(/[।॥.?!]+/u)
    .map((s) => s.trim())
    .filter(Boolean);
}

function truncateWords(text: string, maxWords: number): string {
  const words = text.split(/\s+/u).filter(Boolean);
  return words.slice(0, maxWords).join(" ");
}

/** Deterministic per-model heuristics; no randomness, no model downloads. */
class StubSummarizer implements Summarizer {
  constructor(readonly id: ModelId) {}

  async summarize(text: string, config: GenerationConfig): Promise<string> {
    const clipped = truncateWords(text, config.max_input_tokens);
    const sentences = splitSentences(clipped);
    if (sentences.length === 0) {
      throw new Error("no sentences in input");
    }
    let summary: string;
    switch (this.id) {
      case "mt5_xlsum": {
        // lead sentence with its tail word dropped, abstractive-ish
        const words = sentences[0].split(/\s+/u);
        summary = words.slice(0, Math.max(1, words.length - 1)).join(" ");
        break;
      }
      case "mt5_crosssum":
        summary = sentences[sentences.length - 1];
        break;
      case "scibert_uncased":
        // extractive: first sentence verbatim
        summary = sentences[0];
        break;
      case "mt5_shahidul":
        summary = truncateWords(clipped, 8);
        break;
    }
    return truncateWords(summary, config.max_output_tokens);
  }
}

/**
 * Seq2seq generation through @xenova/transformers with the configured
 * decoding settings (beam 4, no bigram repeats, 64..400 output tokens).
 */
class TransformersSummarizer implements Summarizer {
  private pipe: Promise<any> | null = null;

  constructor(
    readonly id: ModelId,
    private readonly device: string,
  ) {}

  private async pipeline(): Promise<any> {
    if (this.pipe === null) {
      this.pipe = import("@xenova/transformers").then(({ pipeline }) =>
        pipeline("summarization", MODEL_CHECKPOINTS[this.id], {
          device: this.device,
        } as any),
      );
    }
    return this.pipe;
  }

  async summarize(text: string, config: GenerationConfig): Promise<string> {
    const pipe = await this.pipeline();
    const output = await pipe(text, {
      max_length: config.max_output_tokens,
      min_length: config.min_output_tokens,
      num_beams: config.beam_size,
      no_repeat_ngram_size: config.no_repeat_ngram_size,
      truncation: true,
      max_input_length: config.max_input_tokens,
    });
    const summary = output?.[0]?.summary_text;
    if (typeof summary !== "string" || !summary) {
      throw new Error(`model ${this.id} produced no summary`);
    }
    return summary;
  }
}

export type BackendKind = "stub" | "transformers";

export function makeSummarizers(
  backend: BackendKind,
  modelIds: ModelId[],
  device = "cpu",
): Summarizer[] {
  if (backend === "stub") {
    return modelIds.map((id) => new StubSummarizer(id));
  }
  return modelIds.map((id) => new TransformersSummarizer(id, device));
}

export { GENERATION_CONFIG };
