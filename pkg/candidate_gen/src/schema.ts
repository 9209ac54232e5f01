/**
 * Wire and file schemas shared with the summarank pipeline, plus the
 * generation configuration the four summarizers run with.
 */

import { z } from "zod";

/** One corpus document as consumed by the primary loader. */
export const DocumentRecord = z.object({
  id: z.string().min(1),
  text: z.string().min(1),
  summary: z.string().min(1),
  category: z.string().optional(),
});
export type DocumentRecord = z.infer<typeof DocumentRecord>;

/** One line of the candidates file emitted for the primary loader. */
export const CandidatesRecord = z.object({
  id: z.string().min(1),
  candidates: z
    .array(z.object({ model: z.string().min(1), summary: z.string() }))
    .min(1)
    .max(16),
});
export type CandidatesRecord = z.infer<typeof CandidatesRecord>;

/** POST /embed request body. */
export const EmbedRequest = z.object({
  texts: z.array(z.string()),
  mode: z.enum(["sentence", "tokens"]),
});
export type EmbedRequest = z.infer<typeof EmbedRequest>;

/** POST /embed response bodies, by mode. */
export const SentenceResponse = z.object({
  dim: z.number().int().positive(),
  embeddings: z.array(z.array(z.number())),
});
export type SentenceResponse = z.infer<typeof SentenceResponse>;

export const TokensResponse = z.object({
  dim: z.number().int().positive(),
  token_embeddings: z.array(z.array(z.array(z.number()))),
});
export type TokensResponse = z.infer<typeof TokensResponse>;

/**
 * Decoding settings used for every summarizer: beam search of width 4,
 * bigram repetition blocked, inputs truncated to 512 tokens, outputs
 * between 64 and 400 tokens.
 */
export interface GenerationConfig {
  max_input_tokens: number;
  min_output_tokens: number;
  max_output_tokens: number;
  beam_size: number;
  no_repeat_ngram_size: number;
}

export const GENERATION_CONFIG: GenerationConfig = {
  max_input_tokens: 512,
  min_output_tokens: 64,
  max_output_tokens: 400,
  beam_size: 4,
  no_repeat_ngram_size: 2,
};

/** The four summarization models, in canonical order. */
export const MODEL_IDS = [
  "mt5_xlsum",
  "mt5_crosssum",
  "scibert_uncased",
  "mt5_shahidul",
] as const;
export type ModelId = (typeof MODEL_IDS)[number];

/** Hugging Face checkpoints behind each model id (transformers backend). */
export const MODEL_CHECKPOINTS: Record<ModelId, string> = {
  mt5_xlsum: "csebuetnlp/mT5_multilingual_XLSum",
  mt5_crosssum: "csebuetnlp/mT5_m2m_crossSum",
  scibert_uncased: "allenai/scibert_scivocab_uncased",
  mt5_shahidul: "shahidul034/Bangla_text_summarization_model",
};

export interface GenerationManifest {
  generation_config: GenerationConfig;
  models: string[];
  backend: string;
  documents: number;
  generated: number;
  resumed: number;
  failures: { id: string; model: string; error: string }[];
}
