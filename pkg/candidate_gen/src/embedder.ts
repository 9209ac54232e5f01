/**
 * Deterministic fallback embedder for the /embed protocol.
 *
 * Token vectors are L2-normalized bucket counts of character trigrams
 * (FNV-1a over UTF-8 bytes, stable across processes); sentence vectors are
 * the mean pooling of the token vectors. Used when no model checkpoint is
 * available, and for tests: the protocol only requires schema conformance
 * and determinism, not any particular geometry.
 */

const PUNCTUATION = new Set(
  Array.from("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~।॥"),
);

export function normalizeText(text: string): string {
  const composed = text.normalize("NFC");
  let out = "";
  for (const ch of composed) {
    out += PUNCTUATION.has(ch) ? " " : ch;
  }
  return out.split(/\s+/u).filter(Boolean).join(" ");
}

function fnv1a(bytes: Uint8Array): number {
  let hash = 0x811c9dc5;
  for (const byte of bytes) {
    hash ^= byte;
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

const encoder = new TextEncoder();

/** Hashed character-trigram counts of `text`, L2-normalized. */
export function trigramVector(text: string, dim: number): number[] {
  const padded = `${text}`;
  const chars = Array.from(padded);
  const vec = new Array<number>(dim).fill(0);
  for (let i = 0; i + 2 < chars.length; i++) {
    const gram = chars[i] + chars[i + 1] + chars[i + 2];
    vec[fnv1a(encoder.encode(gram)) % dim] += 1;
  }
  const norm = Math.sqrt(vec.reduce((acc, v) => acc + v * v, 0));
  if (norm > 0) {
    for (let i = 0; i < dim; i++) vec[i] /= norm;
  }
  return vec;
}

export interface Embedder {
  readonly dim: number;
  /** One vector per whitespace token of the normalized text. */
  embedTokens(text: string): number[][];
  /** Mean pooling of the token vectors; zeros for empty text. */
  embedSentence(text: string): number[];
}

export class HashingEmbedder implements Embedder {
  constructor(readonly dim: number = 400) {
    if (dim < 1) throw new Error(`dim must be >= 1, got ${dim}`);
  }

  embedTokens(text: string): number[][] {
    const normalized = normalizeText(text);
    if (!normalized) return [];
    return normalized.split(" ").map((token) => trigramVector(token, this.dim));
  }

  embedSentence(text: string): number[] {
    const tokens = this.embedTokens(text);
    const pooled = new Array<number>(this.dim).fill(0);
    if (tokens.length === 0) return pooled;
    for (const vec of tokens) {
      for (let i = 0; i < this.dim; i++) pooled[i] += vec[i];
    }
    for (let i = 0; i < this.dim; i++) pooled[i] /= tokens.length;
    return pooled;
  }
}
