"""Sentence and token embeddings behind a provider abstraction.

Two providers implement the same surface:

* ``LocalProvider`` -- deterministic hashed character-3-gram vectors. No ML
  runtime, language-agnostic, stable across processes and platforms
  (BLAKE2b, not Python's salted ``hash``).
* ``RemoteProvider`` -- HTTP client for the ``POST {endpoint}/embed``
  protocol, where the backing model performs mean pooling server-side.

Cosine similarity and mean pooling live here as well since they operate on
the provider's vectors.
"""

from __future__ import annotations

import hashlib
import logging
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import requests

from summarank.errors import ConfigError, ProtocolError, ProviderUnavailableError
from summarank.text_prep import normalize, tokenize_words

logger = logging.getLogger(__name__)

# Fixed hash seed for the local provider; changing it changes every vector.
_HASH_KEY = b"summarank-3gram-v1"
# Boundary markers guarantee at least one 3-gram for any nonempty text.
_BOUNDARY_START = "\x02"
_BOUNDARY_END = "\x03"

DEFAULT_DIM = 400


@dataclass(frozen=True)
class ProviderConfig:
    """Which provider to build and how it behaves."""

    kind: str = "local"
    dim: int = DEFAULT_DIM
    endpoint: str | None = None
    timeout: float = 10.0
    max_retries: int = 3
    max_parallel_requests: int = 4

    def __post_init__(self) -> None:
        if self.kind not in ("local", "remote"):
            raise ConfigError(f"unknown provider kind {self.kind!r}")
        if self.kind == "local" and self.dim < 1:
            raise ConfigError("local provider requires dim >= 1")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigError("remote provider requires an endpoint")
        if self.max_parallel_requests < 1:
            raise ConfigError("max_parallel_requests must be >= 1")


def _hash_bucket(gram: str, dim: int) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
    return int.from_bytes(digest, "big") % dim


def _hashed_trigram_vector(text: str, dim: int) -> np.ndarray:
    """L2-normalized bucket counts of all character 3-grams of ``text``."""
    padded = _BOUNDARY_START + text + _BOUNDARY_END
    vec = np.zeros(dim, dtype=np.float64)
    for i in range(len(padded) - 2):
        vec[_hash_bucket(padded[i : i + 3], dim)] += 1.0
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


class LocalProvider:
    """Deterministic offline embeddings from hashed character 3-grams."""

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 1:
            raise ConfigError("dim must be >= 1")
        self.dim = dim

    def embed_sentence(self, text: str) -> np.ndarray:
        normalized = normalize(text)
        if not normalized:
            raise ValueError("cannot embed text that normalizes to empty")
        return _hashed_trigram_vector(normalized, self.dim)

    def embed_sentences(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed_sentence(t) for t in texts]

    def embed_tokens(self, text: str) -> list[np.ndarray]:
        tokens = tokenize_words(normalize(text))
        return [_hashed_trigram_vector(tok, self.dim) for tok in tokens]


class RemoteProvider:
    """Client for the HTTP embedding protocol (POST {endpoint}/embed).

    Supports up to ``max_parallel_requests`` concurrent in-flight requests;
    callers may share one instance across threads. The response dimension
    is pinned on first use and any later mismatch raises ProtocolError.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 10.0,
        max_retries: int = 3,
        max_parallel_requests: int = 4,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.max_retries = max_retries
        self._semaphore = threading.Semaphore(max_parallel_requests)
        self._dim_lock = threading.Lock()
        self.dim: int | None = None

    def _post(self, texts: Sequence[str], mode: str) -> dict:
        url = f"{self.endpoint}/embed"
        payload = {"texts": list(texts), "mode": mode}
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                with self._semaphore:
                    response = requests.post(url, json=payload, timeout=self.timeout)
                if response.status_code != 200:
                    last_error = ProviderUnavailableError(
                        f"{url} returned HTTP {response.status_code}"
                    )
                    continue
                return response.json()
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
        raise ProviderUnavailableError(
            f"embedding provider unreachable after {self.max_retries + 1} attempts: {last_error}"
        )

    def _check_dim(self, dim: int) -> None:
        if not isinstance(dim, int) or dim < 1:
            raise ProtocolError(f"provider reported invalid dim {dim!r}")
        with self._dim_lock:
            if self.dim is None:
                self.dim = dim
            elif self.dim != dim:
                raise ProtocolError(
                    f"provider dim changed across calls: {self.dim} then {dim}"
                )

    @staticmethod
    def _as_vector(values, dim: int) -> np.ndarray:
        vec = np.asarray(values, dtype=np.float64)
        if vec.ndim != 1 or vec.shape[0] != dim or not np.all(np.isfinite(vec)):
            raise ProtocolError("provider returned a malformed embedding vector")
        return vec

    def embed_sentences(self, texts: Sequence[str]) -> list[np.ndarray]:
        body = self._post(texts, "sentence")
        try:
            dim = body["dim"]
            embeddings = body["embeddings"]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed sentence-mode response: {exc}") from exc
        self._check_dim(dim)
        if len(embeddings) != len(texts):
            raise ProtocolError("provider returned wrong number of embeddings")
        return [self._as_vector(v, dim) for v in embeddings]

    def embed_sentence(self, text: str) -> np.ndarray:
        return self.embed_sentences([text])[0]

    def embed_tokens(self, text: str) -> list[np.ndarray]:
        body = self._post([text], "tokens")
        try:
            dim = body["dim"]
            per_text = body["token_embeddings"]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed tokens-mode response: {exc}") from exc
        self._check_dim(dim)
        if len(per_text) != 1:
            raise ProtocolError("provider returned wrong number of token lists")
        return [self._as_vector(v, dim) for v in per_text[0]]


def make_provider(cfg: ProviderConfig) -> LocalProvider | RemoteProvider:
    if cfg.kind == "local":
        return LocalProvider(dim=cfg.dim)
    return RemoteProvider(
        endpoint=cfg.endpoint,
        timeout=cfg.timeout,
        max_retries=cfg.max_retries,
        max_parallel_requests=cfg.max_parallel_requests,
    )


def mean_pool(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Component-wise arithmetic mean of same-dimension vectors."""
    if len(vectors) == 0:
        raise ValueError("mean_pool requires at least one vector")
    dims = {v.shape for v in vectors}
    if len(dims) != 1:
        raise ValueError(f"mean_pool requires one shared dim, got {sorted(dims)}")
    return np.mean(np.stack(vectors), axis=0)


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between ``a`` and ``b``, clamped to [-1, 1].

    Two zero vectors are degenerate input: defined as 0 with a warning.
    """
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 and norm_b == 0.0:
        logger.warning("cosine_similarity of two zero vectors; returning 0.0")
        return 0.0
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))
