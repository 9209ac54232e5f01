/**
 * HTTP embedding service implementing the summarank /embed protocol:
 *
 *   POST /embed {"texts": [string], "mode": "sentence" | "tokens"}
 *     -> {"dim": D, "embeddings": [[number]]}            (sentence mode)
 *     -> {"dim": D, "token_embeddings": [[[number]]]}    (tokens mode)
 *
 * 400 on malformed requests, 503 while the backing embedder is loading.
 * Responses are deterministic for identical requests.
 */

import express, { type Express } from "express";

import type { Embedder } from "./embedder.js";
import { EmbedRequest } from "./schema.js";

export interface ServerOptions {
  embedder: Embedder | Promise<Embedder>;
}

export function createApp(options: ServerOptions): Express {
  let embedder: Embedder | null = null;
  Promise.resolve(options.embedder).then((ready) => {
    embedder = ready;
  });

  const app = express();
  app.use(express.json({ limit: "16mb" }));

  app.post("/embed", (req, res) => {
    if (embedder === null) {
      res.status(503).json({ error: "model is still loading" });
      return;
    }
    const parsed = EmbedRequest.safeParse(req.body);
    if (!parsed.success) {
      res.status(400).json({ error: parsed.error.message });
      return;
    }
    const { texts, mode } = parsed.data;
    if (mode === "sentence") {
      res.json({
        dim: embedder.dim,
        embeddings: texts.map((t) => embedder!.embedSentence(t)),
      });
    } else {
      res.json({
        dim: embedder.dim,
        token_embeddings: texts.map((t) => embedder!.embedTokens(t)),
      });
    }
  });

  return app;
}

export async function serve(app: Express, port: number): Promise<() => void> {
  return new Promise((resolve, reject) => {
    const server = app.listen(port, () => resolve(() => server.close()));
    server.on("error", reject);
  });
}
