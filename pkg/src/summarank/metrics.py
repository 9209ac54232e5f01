"""NLG evaluation metrics over word tokens.

Everything is sentence-level against a single reference: BLEU-3/4 with an
epsilon smoothing floor, ROUGE-1/2/L (recall/precision/F1), exact-match
METEOR, WER/WIL from a minimal edit alignment, and BERTScore from greedy
max-cosine token matching. No stemming, no idf weighting, no baseline
rescaling.

The quadratic alignment and LCS dynamic programs run through
summarank.kernels (compiled core when available).
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from summarank import kernels
from summarank.embedding import mean_pool  # noqa: F401  (re-exported pooling helper)
from summarank.text_prep import TokenSequence, ngrams, normalize, tokenize_words

# Floor applied to any zero n-gram precision before the log in BLEU.
BLEU_SMOOTHING_EPS = 1e-9

# METEOR chunk search bounds. Exhaustive below these limits (every state and
# every candidate pairing is kept for short inputs), beam-pruned beyond.
_METEOR_BEAM = 64
_METEOR_BRANCH = 16


@dataclass(frozen=True)
class PRF:
    """Precision / recall / F1 triple."""

    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class AlignmentCounts:
    """Hit/substitution/deletion/insertion counts of a minimal edit alignment."""

    hits: int
    substitutions: int
    deletions: int
    insertions: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def _tokens(seq: Sequence[str] | TokenSequence) -> tuple[str, ...]:
    if isinstance(seq, TokenSequence):
        return seq.tokens
    return tuple(seq)


def _token_ids(
    hyp: tuple[str, ...], ref: tuple[str, ...]
) -> tuple[list[int], list[int]]:
    """Intern tokens to dense int ids so the kernels compare integers."""
    vocab: dict[str, int] = {}
    hyp_ids = [vocab.setdefault(tok, len(vocab)) for tok in hyp]
    ref_ids = [vocab.setdefault(tok, len(vocab)) for tok in ref]
    return hyp_ids, ref_ids


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def bleu(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
    max_n: int = 4,
) -> float:
    """BLEU with uniform weights up to ``max_n`` and a brevity penalty.

    Modified (clipped) n-gram precisions; any zero precision is floored at
    BLEU_SMOOTHING_EPS before the log. Empty hypothesis scores 0.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    if not hyp_t:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        hyp_grams = ngrams(hyp_t, n)
        ref_grams = ngrams(ref_t, n)
        total = sum(hyp_grams.values())
        overlap = sum(min(count, ref_grams[g]) for g, count in hyp_grams.items())
        precision = overlap / total if total else 0.0
        log_sum += math.log(max(precision, BLEU_SMOOTHING_EPS)) / max_n
    brevity = min(1.0, math.exp(1.0 - len(ref_t) / len(hyp_t)))
    return brevity * math.exp(log_sum)


def rouge_n(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
    n: int,
) -> PRF:
    """ROUGE-N: clipped n-gram overlap recall/precision/F1."""
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    hyp_grams = ngrams(hyp_t, n)
    ref_grams = ngrams(ref_t, n)
    overlap = sum(min(count, hyp_grams[g]) for g, count in ref_grams.items())
    ref_total = sum(ref_grams.values())
    hyp_total = sum(hyp_grams.values())
    recall = overlap / ref_total if ref_total else 0.0
    precision = overlap / hyp_total if hyp_total else 0.0
    return PRF(precision=precision, recall=recall, f1=_f1(precision, recall))


def rouge_l(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
) -> PRF:
    """ROUGE-L: longest common subsequence recall/precision/F1."""
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    if not hyp_t:
        return PRF(0.0, 0.0, 0.0)
    hyp_ids, ref_ids = _token_ids(hyp_t, ref_t)
    lcs = kernels.lcs_length(hyp_ids, ref_ids)
    recall = lcs / len(ref_t)
    precision = lcs / len(hyp_t)
    return PRF(precision=precision, recall=recall, f1=_f1(precision, recall))


def _min_chunks(hyp: tuple[str, ...], ref: tuple[str, ...]) -> tuple[int, int]:
    """(matches, chunks) for an exact-match alignment that first maximizes
    unigram matches and then minimizes the number of contiguous chunks.

    A chunk is a maximal run of matched positions adjacent in both strings.
    The search enumerates pairings left-to-right over the hypothesis and is
    exhaustive whenever the state count stays within _METEOR_BEAM (always
    true for short inputs); larger inputs are beam-pruned, matching the
    usual practice for this metric.
    """
    hyp_counts = Counter(hyp)
    ref_counts = Counter(ref)
    budget = {
        w: min(c, ref_counts[w]) for w, c in hyp_counts.items() if w in ref_counts
    }
    total_matches = sum(budget.values())
    if total_matches == 0:
        return 0, 0

    ref_positions: dict[str, list[int]] = defaultdict(list)
    for j, word in enumerate(ref):
        if word in budget:
            ref_positions[word].append(j)
    hyp_positions: dict[str, list[int]] = defaultdict(list)
    for i, word in enumerate(hyp):
        if word in budget:
            hyp_positions[word].append(i)

    # state key: (last matched pair, used ref positions) -> chunks. The
    # (-2, -2) sentinel can never look adjacent to a real position.
    sentinel = (-2, -2)
    states: dict[tuple, int] = {(sentinel, frozenset()): 0}
    matched_of: dict[tuple, dict[str, int]] = {(sentinel, frozenset()): {}}

    for i, word in enumerate(hyp):
        if word not in budget:
            continue
        remaining_here = len(hyp_positions[word]) - bisect_left(hyp_positions[word], i)
        next_states: dict[tuple, int] = {}
        next_matched: dict[tuple, dict[str, int]] = {}

        def _offer(key: tuple, chunks: int, matched: dict[str, int]) -> None:
            if key not in next_states or chunks < next_states[key]:
                next_states[key] = chunks
                next_matched[key] = matched

        for (last, used), chunks in states.items():
            matched = matched_of[(last, used)]
            need = budget[word] - matched.get(word, 0)
            if need == 0 or need < remaining_here:
                _offer((last, used), chunks, matched)
            if need > 0:
                available = [j for j in ref_positions[word] if j not in used]
                target = last[1] + 1
                available.sort(key=lambda j: (j != target, abs(j - target), j))
                for j in available[:_METEOR_BRANCH]:
                    contiguous = i == last[0] + 1 and j == last[1] + 1
                    new_chunks = chunks + (0 if contiguous else 1)
                    new_matched = dict(matched)
                    new_matched[word] = new_matched.get(word, 0) + 1
                    _offer(((i, j), used | {j}), new_chunks, new_matched)

        if len(next_states) > _METEOR_BEAM:
            ranked = sorted(
                next_states.items(),
                key=lambda kv: (kv[1], kv[0][0], tuple(sorted(kv[0][1]))),
            )[:_METEOR_BEAM]
            next_states = dict(ranked)
            next_matched = {key: next_matched[key] for key, _ in ranked}
        states = next_states
        matched_of = next_matched

    return total_matches, min(states.values())


def meteor(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
) -> float:
    """Exact-match METEOR: recall-weighted F-mean times a fragmentation penalty.

    F_mean = 10PR / (R + 9P); penalty = 0.5 * (chunks / matches)^3;
    score = F_mean * (1 - penalty), and 0 when nothing matches.
    """
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    if not hyp_t:
        return 0.0
    matches, chunks = _min_chunks(hyp_t, ref_t)
    if matches == 0:
        return 0.0
    precision = matches / len(hyp_t)
    recall = matches / len(ref_t)
    f_mean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1.0 - penalty)


def align(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
) -> AlignmentCounts:
    """Minimal-cost Levenshtein alignment counts over word tokens.

    Unit costs for substitutions/deletions/insertions; among minimal
    alignments the hit count is maximal. Satisfies H+S+D = len(ref) and
    H+S+I = len(hyp).
    """
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    hyp_ids, ref_ids = _token_ids(hyp_t, ref_t)
    cost, hits = kernels.align_counts(hyp_ids, ref_ids)
    substitutions = len(ref_t) + len(hyp_t) - 2 * hits - cost
    deletions = len(ref_t) - hits - substitutions
    insertions = len(hyp_t) - hits - substitutions
    return AlignmentCounts(
        hits=hits,
        substitutions=substitutions,
        deletions=deletions,
        insertions=insertions,
    )


def wer(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
) -> float:
    """Word error rate: (S + D + I) / len(ref). May exceed 1."""
    ref_t = _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    counts = align(hyp, ref_t)
    return counts.errors / len(ref_t)


def wil(
    hyp: Sequence[str] | TokenSequence,
    ref: Sequence[str] | TokenSequence,
) -> float:
    """Word information lost: 1 - (H/len(ref)) * (H/len(hyp)), in [0, 1]."""
    hyp_t, ref_t = _tokens(hyp), _tokens(ref)
    if not ref_t:
        raise ValueError("reference must be nonempty")
    if not hyp_t:
        return 1.0
    hits = align(hyp_t, ref_t).hits
    return 1.0 - (hits / len(ref_t)) * (hits / len(hyp_t))


def bertscore(
    hyp_tok_embs: Sequence[np.ndarray],
    ref_tok_embs: Sequence[np.ndarray],
) -> PRF:
    """Greedy max-cosine token matching: P over hyp tokens, R over ref tokens."""
    if len(hyp_tok_embs) == 0 or len(ref_tok_embs) == 0:
        raise ValueError("token embedding lists must be nonempty")
    hyp_mat = np.stack(hyp_tok_embs).astype(np.float64)
    ref_mat = np.stack(ref_tok_embs).astype(np.float64)
    if hyp_mat.shape[1] != ref_mat.shape[1]:
        raise ValueError(
            f"dimension mismatch: {hyp_mat.shape[1]} vs {ref_mat.shape[1]}"
        )

    def _unit_rows(mat: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(mat, axis=1, keepdims=True)
        return np.divide(mat, norms, out=np.zeros_like(mat), where=norms > 0)

    sims = np.clip(_unit_rows(hyp_mat) @ _unit_rows(ref_mat).T, -1.0, 1.0)
    precision = float(sims.max(axis=1).mean())
    recall = float(sims.max(axis=0).mean())
    return PRF(precision=precision, recall=recall, f1=_f1(precision, recall))


# Flat column order used by reports; keep in sync with as_flat_dict.
METRIC_COLUMNS: tuple[str, ...] = (
    "bleu3",
    "bleu4",
    "rouge1_recall",
    "rouge1_precision",
    "rouge1_f1",
    "rouge2_recall",
    "rouge2_precision",
    "rouge2_f1",
    "rougel_recall",
    "rougel_precision",
    "rougel_f1",
    "meteor",
    "wer",
    "wil",
    "bertscore_precision",
    "bertscore_recall",
    "bertscore_f1",
)


@dataclass(frozen=True)
class MetricReport:
    """All per-pair metric scores; every field always populated."""

    bleu3: float
    bleu4: float
    rouge: Mapping[str, PRF]
    meteor: float
    wer: float
    wil: float
    bertscore: PRF

    def as_flat_dict(self) -> dict[str, float]:
        flat = {
            "bleu3": self.bleu3,
            "bleu4": self.bleu4,
            "meteor": self.meteor,
            "wer": self.wer,
            "wil": self.wil,
            "bertscore_precision": self.bertscore.precision,
            "bertscore_recall": self.bertscore.recall,
            "bertscore_f1": self.bertscore.f1,
        }
        for key, label in (("r1", "rouge1"), ("r2", "rouge2"), ("rl", "rougel")):
            prf = self.rouge[key]
            flat[f"{label}_recall"] = prf.recall
            flat[f"{label}_precision"] = prf.precision
            flat[f"{label}_f1"] = prf.f1
        return {column: flat[column] for column in METRIC_COLUMNS}

    @classmethod
    def from_flat_dict(cls, flat: Mapping[str, float]) -> "MetricReport":
        """Inverse of as_flat_dict."""
        rouge = {
            key: PRF(
                precision=flat[f"{label}_precision"],
                recall=flat[f"{label}_recall"],
                f1=flat[f"{label}_f1"],
            )
            for key, label in (("r1", "rouge1"), ("r2", "rouge2"), ("rl", "rougel"))
        }
        return cls(
            bleu3=flat["bleu3"],
            bleu4=flat["bleu4"],
            rouge=rouge,
            meteor=flat["meteor"],
            wer=flat["wer"],
            wil=flat["wil"],
            bertscore=PRF(
                precision=flat["bertscore_precision"],
                recall=flat["bertscore_recall"],
                f1=flat["bertscore_f1"],
            ),
        )

    @classmethod
    def empty_hypothesis(cls) -> "MetricReport":
        """Degenerate report for a hypothesis that normalizes to empty."""
        zero = PRF(0.0, 0.0, 0.0)
        return cls(
            bleu3=0.0,
            bleu4=0.0,
            rouge={"r1": zero, "r2": zero, "rl": zero},
            meteor=0.0,
            wer=1.0,
            wil=1.0,
            bertscore=zero,
        )


def evaluate_pair(hyp_text: str, target_text: str, provider) -> MetricReport:
    """Normalize, tokenize and score ``hyp_text`` against ``target_text``.

    ``target_text`` may be the reference summary or the source document.
    Only BERTScore touches the embedding provider; its errors propagate.
    """
    hyp_norm = normalize(hyp_text)
    target_norm = normalize(target_text)
    if not hyp_norm:
        raise ValueError("hypothesis normalizes to empty")
    if not target_norm:
        raise ValueError("target normalizes to empty")
    hyp_toks = tokenize_words(hyp_norm)
    target_toks = tokenize_words(target_norm)
    return MetricReport(
        bleu3=bleu(hyp_toks, target_toks, max_n=3),
        bleu4=bleu(hyp_toks, target_toks, max_n=4),
        rouge={
            "r1": rouge_n(hyp_toks, target_toks, 1),
            "r2": rouge_n(hyp_toks, target_toks, 2),
            "rl": rouge_l(hyp_toks, target_toks),
        },
        meteor=meteor(hyp_toks, target_toks),
        wer=wer(hyp_toks, target_toks),
        wil=wil(hyp_toks, target_toks),
        bertscore=bertscore(
            provider.embed_tokens(hyp_text),
            provider.embed_tokens(target_text),
        ),
    )
