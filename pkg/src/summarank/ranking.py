"""Star-graph ranking of candidate summaries around a reference anchor.

Node 0 is the human reference, nodes 1..N the candidates. The Summary
Similarity Matrix carries clamped reference-candidate cosines on its 0th
row/column only; candidates never connect to each other. Weighted PageRank
over that undirected star ranks the candidates, and the top PageRank value
picks the winner.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from summarank.embedding import cosine_similarity
from summarank.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-8
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ConfigError(f"damping must lie in (0, 1), got {self.damping}")
        if self.tolerance <= 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")


class SummarySimilarityMatrix:
    """(N+1) x (N+1) symmetric matrix, nonzero only in row/column 0."""

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be square, got shape {entries.shape}")
        if entries.shape[0] < 2:
            raise ValueError("need at least one candidate besides the reference")
        if not np.allclose(entries, entries.T):
            raise ValueError("entries must be symmetric")
        if np.any(np.diag(entries) != 0.0):
            raise ValueError("diagonal must be zero (no self-loops)")
        interior = entries[1:, 1:]
        if np.any(interior != 0.0):
            raise ValueError("candidate-candidate entries must be zero (star structure)")
        if np.any(entries < 0.0) or np.any(entries > 1.0):
            raise ValueError("entries must lie in [0, 1]")
        self.entries = entries
        self.n_candidates = entries.shape[0] - 1

    @property
    def weights(self) -> np.ndarray:
        """Reference-candidate edge weights w_1..w_N."""
        return self.entries[0, 1:].copy()


@dataclass(frozen=True)
class RankResult:
    scores: tuple[float, ...]
    ordering: tuple[int, ...]
    best_index: int
    best_model_id: str
    iterations_used: int
    converged: bool = True
    similarities: tuple[float, ...] = ()

    @property
    def n_candidates(self) -> int:
        return len(self.scores) - 1


def build_ssm(
    reference_emb: np.ndarray, candidate_embs: Sequence[np.ndarray]
) -> SummarySimilarityMatrix:
    """SSM with entries[0][i] = max(0, cos(reference, candidate_i))."""
    if len(candidate_embs) == 0:
        raise ValueError("need at least one candidate embedding")
    n = len(candidate_embs)
    entries = np.zeros((n + 1, n + 1), dtype=np.float64)
    for i, emb in enumerate(candidate_embs, start=1):
        weight = max(0.0, cosine_similarity(reference_emb, emb))
        entries[0, i] = weight
        entries[i, 0] = weight
    return SummarySimilarityMatrix(entries)


def pagerank(
    ssm: SummarySimilarityMatrix, cfg: PageRankConfig = PageRankConfig()
) -> tuple[np.ndarray, int, bool]:
    """Power iteration on the weighted undirected star graph.

    Transition probability i->j is entries[i][j] / sum_k entries[i][k];
    a node with an all-zero row distributes uniformly over all nodes.
    Update: r <- (1-d)/(N+1) + d * (r @ T), stopping when the L1 change
    drops below the tolerance. Returns (scores, iterations_used, converged);
    non-convergence returns the best iterate with converged=False.
    """
    entries = ssm.entries
    n = entries.shape[0]
    row_sums = entries.sum(axis=1)
    transition = np.full((n, n), 1.0 / n, dtype=np.float64)
    nonzero = row_sums > 0.0
    transition[nonzero] = entries[nonzero] / row_sums[nonzero, None]

    d = cfg.damping
    teleport = (1.0 - d) / n
    scores = np.full(n, 1.0 / n, dtype=np.float64)
    for iteration in range(1, cfg.max_iterations + 1):
        updated = teleport + d * (scores @ transition)
        delta = float(np.abs(updated - scores).sum())
        scores = updated
        if delta < cfg.tolerance:
            return scores, iteration, True
    logger.warning(
        "pagerank did not converge within %d iterations (last L1 delta %.3e)",
        cfg.max_iterations,
        delta,
    )
    return scores, cfg.max_iterations, False


def select_best(
    scores: Sequence[float],
    model_ids: Sequence[str],
    iterations_used: int = 0,
    converged: bool = True,
    similarities: Sequence[float] = (),
) -> RankResult:
    """Pick the top candidate; node 0 (the reference) is excluded.

    Ties break toward the lowest candidate index so output is deterministic.
    """
    n_candidates = len(scores) - 1
    if n_candidates < 1:
        raise ValueError("need at least one candidate score")
    if len(model_ids) != n_candidates:
        raise ValueError(
            f"expected {n_candidates} model ids, got {len(model_ids)}"
        )
    ordering = sorted(range(1, n_candidates + 1), key=lambda i: (-scores[i], i))
    best_index = ordering[0]
    return RankResult(
        scores=tuple(float(s) for s in scores),
        ordering=tuple(ordering),
        best_index=best_index,
        best_model_id=model_ids[best_index - 1],
        iterations_used=iterations_used,
        converged=converged,
        similarities=tuple(float(s) for s in similarities),
    )


def rank_candidates(
    reference_text: str,
    candidate_texts: Sequence[str],
    provider,
    cfg: PageRankConfig = PageRankConfig(),
    model_ids: Sequence[str] | None = None,
) -> RankResult:
    """Embed, build the SSM, run PageRank and select the best candidate.

    A candidate that normalizes to empty gets similarity 0 and a warning;
    an empty reference violates the contract and raises.
    """
    from summarank.text_prep import normalize

    if len(candidate_texts) == 0:
        raise ValueError("need at least one candidate text")
    if model_ids is None:
        model_ids = [f"candidate-{i}" for i in range(1, len(candidate_texts) + 1)]
    if not normalize(reference_text):
        raise ValueError("reference text normalizes to empty")

    nonempty = [i for i, text in enumerate(candidate_texts) if normalize(text)]
    for i in range(len(candidate_texts)):
        if i not in nonempty:
            logger.warning(
                "candidate %d (%s) normalizes to empty; similarity forced to 0",
                i + 1,
                model_ids[i],
            )
    # one batched call so the remote provider sees a single request per doc
    batch = provider.embed_sentences(
        [reference_text] + [candidate_texts[i] for i in nonempty]
    )
    reference_emb = batch[0]
    dim = reference_emb.shape[0]
    candidate_embs = [np.zeros(dim, dtype=np.float64)] * len(candidate_texts)
    for vec, i in zip(batch[1:], nonempty):
        candidate_embs[i] = vec

    ssm = build_ssm(reference_emb, candidate_embs)
    scores, iterations, converged = pagerank(ssm, cfg)
    return select_best(
        scores,
        model_ids,
        iterations_used=iterations,
        converged=converged,
        similarities=ssm.weights,
    )
