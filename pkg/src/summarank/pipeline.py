"""Corpus ingestion and per-document orchestration.

Reads documents and candidate summaries from JSON-lines/CSV files, ranks
every document's candidates against its human reference, evaluates all
summaries in one or both comparison modes (against the source text and
against the reference), and aggregates unweighted per-metric means plus
per-model win counts.

Failure policy: malformed records are quarantined and counted; a corpus
aborts once more than 10% of its records are bad.
"""

from __future__ import annotations

import csv
import json
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from summarank import __version__, kernels
from summarank.embedding import ProviderConfig, make_provider
from summarank.errors import ConfigError, DataError
from summarank.metrics import METRIC_COLUMNS, MetricReport, evaluate_pair
from summarank.ranking import PageRankConfig, RankResult, rank_candidates
from summarank.text_prep import RawDocument, normalize

logger = logging.getLogger(__name__)

# Fraction of bad records (at ingestion or per-document processing) beyond
# which a corpus run aborts instead of quarantining.
QUARANTINE_ABORT_FRACTION = 0.10

COMPARISON_MODES = ("vs_text", "vs_reference")
OUTPUT_FORMATS = ("csv", "json", "markdown")

SUBJECT_GIVEN = "given_reference"
SUBJECT_BEST = "best"


@dataclass(frozen=True)
class Candidate:
    model_id: str
    summary: str


@dataclass(frozen=True)
class CandidateSet:
    doc_id: str
    candidates: tuple[Candidate, ...]

    @property
    def model_ids(self) -> tuple[str, ...]:
        return tuple(c.model_id for c in self.candidates)


@dataclass(frozen=True)
class SkipRecord:
    location: str
    reason: str


@dataclass(frozen=True)
class EvaluationRow:
    doc_id: str
    mode: str  # vs_text (target = source document) | vs_reference
    subject: str  # given_reference | best | a model id
    model: str  # winning model for "best" rows, model id for model rows
    report: MetricReport


@dataclass(frozen=True)
class RunConfig:
    documents_path: str
    candidates_path: str
    provider: ProviderConfig = ProviderConfig()
    pagerank: PageRankConfig = PageRankConfig()
    sample_k: int | None = None
    seed: int = 42
    comparison_modes: tuple[str, ...] = COMPARISON_MODES
    output_dir: str = "out"
    output_formats: tuple[str, ...] = ("csv",)
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.documents_path or not self.candidates_path:
            raise ConfigError("documents_path and candidates_path must be nonempty")
        if not self.comparison_modes:
            raise ConfigError("at least one comparison mode is required")
        for mode in self.comparison_modes:
            if mode not in COMPARISON_MODES:
                raise ConfigError(f"unknown comparison mode {mode!r}")
        if not self.output_formats:
            raise ConfigError("at least one output format is required")
        for fmt in self.output_formats:
            if fmt not in OUTPUT_FORMATS:
                raise ConfigError(f"unknown output format {fmt!r}")
        if self.sample_k is not None and self.sample_k < 1:
            raise ConfigError("sample_k must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass
class QuarantineReport:
    document_skips: list[SkipRecord] = field(default_factory=list)
    candidate_exclusions: list[SkipRecord] = field(default_factory=list)
    document_failures: list[SkipRecord] = field(default_factory=list)

    @property
    def total(self) -> int:
        return (
            len(self.document_skips)
            + len(self.candidate_exclusions)
            + len(self.document_failures)
        )


@dataclass
class RunResult:
    rows: list[EvaluationRow]
    wins: dict[str, int]
    aggregates: dict[str, dict[str, dict[str, float]]]  # mode -> subject -> metric
    subject_order: list[str]
    mode_order: list[str]
    ranked_count: int
    quarantine: QuarantineReport
    manifest: dict


def load_documents(
    path: str | Path, fmt: str | None = None
) -> tuple[list[RawDocument], list[SkipRecord]]:
    """Load RawDocuments from a JSON-lines or CSV file.

    Records failing the document invariants (missing fields, text or summary
    empty after normalization) are skipped and reported; duplicate ids are a
    hard error, and more than 10% skipped records aborts the load.
    """
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if fmt not in ("jsonl", "csv"):
        raise ConfigError(f"unknown documents format {fmt!r}")

    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read documents file {path}: {exc}") from exc

    records: list[tuple[str, dict]] = []
    skipped: list[SkipRecord] = []
    if fmt == "jsonl":
        for line_no, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            location = f"{path.name}:{line_no}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                skipped.append(SkipRecord(location, f"invalid JSON: {exc.msg}"))
                records.append((location, {}))
                continue
            if not isinstance(record, dict):
                skipped.append(SkipRecord(location, "record is not an object"))
                records.append((location, {}))
                continue
            records.append((location, record))
    else:
        reader = csv.DictReader(raw.splitlines())
        for row_no, record in enumerate(reader, start=2):
            records.append((f"{path.name}:{row_no}", dict(record)))

    documents: list[RawDocument] = []
    seen_ids: set[str] = set()
    for index, (location, record) in enumerate(records, start=1):
        if not record:
            continue  # already counted as skipped above
        doc_id = str(record.get("id") or f"row-{index:06d}")
        text = record.get("text")
        summary = record.get("summary")
        if not isinstance(text, str) or not isinstance(summary, str):
            skipped.append(SkipRecord(location, "missing text or summary field"))
            continue
        if not normalize(text):
            skipped.append(SkipRecord(location, "text empty after normalization"))
            continue
        if not normalize(summary):
            skipped.append(SkipRecord(location, "summary empty after normalization"))
            continue
        if doc_id in seen_ids:
            raise DataError(f"duplicate document id {doc_id!r} at {location}")
        seen_ids.add(doc_id)
        category = record.get("category")
        documents.append(
            RawDocument(
                id=doc_id,
                text=text,
                reference=summary,
                category=str(category) if category is not None else None,
            )
        )

    total = len(records)
    if total and len(skipped) / total > QUARANTINE_ABORT_FRACTION:
        raise DataError(
            f"{len(skipped)} of {total} document records malformed "
            f"(> {QUARANTINE_ABORT_FRACTION:.0%} threshold); aborting"
        )
    return documents, skipped


def load_candidates(
    path: str | Path, known_ids: set[str] | None = None
) -> tuple[dict[str, CandidateSet], list[SkipRecord]]:
    """Load per-document candidate summaries from a JSON-lines file.

    Entries for unknown document ids are excluded and reported. A duplicate
    model id within one set, a duplicate document entry, or a candidate
    count outside 1..16 is a hard error.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read candidates file {path}: {exc}") from exc

    sets: dict[str, CandidateSet] = {}
    exclusions: list[SkipRecord] = []
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        location = f"{path.name}:{line_no}"
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON at {location}: {exc.msg}") from exc
        if not isinstance(record, dict) or "id" not in record:
            raise DataError(f"candidates record at {location} lacks an id")
        doc_id = str(record["id"])
        entries = record.get("candidates")
        if not isinstance(entries, list) or not (1 <= len(entries) <= 16):
            raise DataError(
                f"candidates for {doc_id!r} at {location} must list 1..16 entries"
            )
        candidates: list[Candidate] = []
        model_ids: set[str] = set()
        for entry in entries:
            if (
                not isinstance(entry, dict)
                or not isinstance(entry.get("model"), str)
                or not isinstance(entry.get("summary"), str)
                or not entry["model"]
            ):
                raise DataError(f"malformed candidate entry at {location}")
            if entry["model"] in model_ids:
                raise DataError(
                    f"duplicate model id {entry['model']!r} for {doc_id!r} at {location}"
                )
            model_ids.add(entry["model"])
            candidates.append(Candidate(model_id=entry["model"], summary=entry["summary"]))
        if doc_id in sets:
            raise DataError(f"duplicate candidates entry for {doc_id!r} at {location}")
        if known_ids is not None and doc_id not in known_ids:
            exclusions.append(SkipRecord(location, f"unknown document id {doc_id!r}"))
            continue
        sets[doc_id] = CandidateSet(doc_id=doc_id, candidates=tuple(candidates))
    return sets, exclusions


def sample_random(docs: list[RawDocument], k: int, seed: int) -> list[RawDocument]:
    """Uniform sample of ``k`` documents without replacement.

    Deterministic for a given seed (Mersenne Twister via random.Random);
    the sampled documents keep their original relative order.
    """
    if not 1 <= k <= len(docs):
        raise ValueError(f"sample size {k} outside 1..{len(docs)}")
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(docs)), k))
    return [docs[i] for i in picked]


def _evaluate_document(
    doc: RawDocument,
    candidate_set: CandidateSet,
    provider,
    pagerank_cfg: PageRankConfig,
    modes: tuple[str, ...],
) -> tuple[RankResult, list[EvaluationRow]]:
    """Rank one document's candidates, then score all summaries per mode."""
    rank = rank_candidates(
        doc.reference,
        [c.summary for c in candidate_set.candidates],
        provider,
        pagerank_cfg,
        model_ids=list(candidate_set.model_ids),
    )
    rows: list[EvaluationRow] = []
    for mode in modes:
        target = doc.text if mode == "vs_text" else doc.reference
        reports: dict[str, MetricReport] = {}
        for cand in candidate_set.candidates:
            if normalize(cand.summary):
                reports[cand.model_id] = evaluate_pair(cand.summary, target, provider)
            else:
                logger.warning(
                    "doc %s: candidate from %s is empty after normalization; "
                    "scores forced to the degenerate report",
                    doc.id,
                    cand.model_id,
                )
                reports[cand.model_id] = MetricReport.empty_hypothesis()
        if mode == "vs_text":
            rows.append(
                EvaluationRow(
                    doc_id=doc.id,
                    mode=mode,
                    subject=SUBJECT_GIVEN,
                    model="",
                    report=evaluate_pair(doc.reference, target, provider),
                )
            )
        rows.append(
            EvaluationRow(
                doc_id=doc.id,
                mode=mode,
                subject=SUBJECT_BEST,
                model=rank.best_model_id,
                report=reports[rank.best_model_id],
            )
        )
        for cand in candidate_set.candidates:
            rows.append(
                EvaluationRow(
                    doc_id=doc.id,
                    mode=mode,
                    subject=cand.model_id,
                    model=cand.model_id,
                    report=reports[cand.model_id],
                )
            )
    return rank, rows


def _aggregate(
    rows: list[EvaluationRow], mode_order: list[str], subject_order: list[str]
) -> dict[str, dict[str, dict[str, float]]]:
    """Unweighted per-metric mean over documents, grouped by mode and subject."""
    grouped: dict[tuple[str, str], list[MetricReport]] = {}
    for row in rows:
        grouped.setdefault((row.mode, row.subject), []).append(row.report)
    aggregates: dict[str, dict[str, dict[str, float]]] = {}
    for mode in mode_order:
        per_subject: dict[str, dict[str, float]] = {}
        for subject in subject_order:
            reports = grouped.get((mode, subject))
            if not reports:
                continue
            flats = [r.as_flat_dict() for r in reports]
            per_subject[subject] = {
                column: float(np.mean([flat[column] for flat in flats]))
                for column in METRIC_COLUMNS
            }
        aggregates[mode] = per_subject
    return aggregates


def run_corpus(cfg: RunConfig) -> RunResult:
    """Execute the full pipeline for one corpus.

    Per-document failures are quarantined and the run continues; more than
    10% failed documents aborts. Deterministic given a local provider and a
    fixed seed: documents are processed by a bounded worker pool but results
    are merged in ingestion order.
    """
    documents, doc_skips = load_documents(cfg.documents_path)
    loaded_count = len(documents)
    if cfg.sample_k is not None:
        if cfg.sample_k > len(documents):
            raise DataError(
                f"sample_k={cfg.sample_k} exceeds corpus size {len(documents)}"
            )
        documents = sample_random(documents, cfg.sample_k, cfg.seed)

    candidate_sets, exclusions = load_candidates(
        cfg.candidates_path, known_ids={d.id for d in documents}
    )
    quarantine = QuarantineReport(
        document_skips=doc_skips, candidate_exclusions=exclusions
    )

    todo: list[tuple[RawDocument, CandidateSet]] = []
    for doc in documents:
        cand = candidate_sets.get(doc.id)
        if cand is None:
            quarantine.candidate_exclusions.append(
                SkipRecord(doc.id, "no candidates for document")
            )
            continue
        todo.append((doc, cand))

    provider = make_provider(cfg.provider)
    outcomes: list[tuple[RankResult, list[EvaluationRow]] | None] = [None] * len(todo)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [
            pool.submit(
                _evaluate_document,
                doc,
                cand,
                provider,
                cfg.pagerank,
                cfg.comparison_modes,
            )
            for doc, cand in todo
        ]
        for index, future in enumerate(futures):
            try:
                outcomes[index] = future.result()
            except Exception as exc:  # quarantine-and-continue
                doc_id = todo[index][0].id
                logger.warning("doc %s failed: %s", doc_id, exc)
                quarantine.document_failures.append(SkipRecord(doc_id, str(exc)))

    if todo and len(quarantine.document_failures) / len(todo) > QUARANTINE_ABORT_FRACTION:
        raise DataError(
            f"{len(quarantine.document_failures)} of {len(todo)} documents failed "
            f"(> {QUARANTINE_ABORT_FRACTION:.0%} threshold); aborting"
        )

    rows: list[EvaluationRow] = []
    wins: dict[str, int] = {}
    model_order: list[str] = []
    for (doc, cand), outcome in zip(todo, outcomes):
        for model_id in cand.model_ids:
            if model_id not in wins:
                wins[model_id] = 0
                model_order.append(model_id)
        if outcome is None:
            continue
        rank, doc_rows = outcome
        wins[rank.best_model_id] += 1
        rows.extend(doc_rows)

    ranked_count = sum(1 for outcome in outcomes if outcome is not None)
    mode_order = [m for m in COMPARISON_MODES if m in cfg.comparison_modes]
    subject_order = [SUBJECT_GIVEN, SUBJECT_BEST, *model_order]
    aggregates = _aggregate(rows, mode_order, subject_order)

    manifest = {
        "config": {
            "documents_path": str(cfg.documents_path),
            "candidates_path": str(cfg.candidates_path),
            "provider": {
                "kind": cfg.provider.kind,
                "dim": cfg.provider.dim,
                "endpoint": cfg.provider.endpoint,
                "timeout": cfg.provider.timeout,
                "max_retries": cfg.provider.max_retries,
                "max_parallel_requests": cfg.provider.max_parallel_requests,
            },
            "pagerank": {
                "damping": cfg.pagerank.damping,
                "tolerance": cfg.pagerank.tolerance,
                "max_iterations": cfg.pagerank.max_iterations,
            },
            "sample_k": cfg.sample_k,
            "comparison_modes": list(mode_order),
            "output_dir": str(cfg.output_dir),
            "output_formats": list(cfg.output_formats),
            "workers": cfg.workers,
        },
        "seed": cfg.seed,
        "versions": {
            "summarank": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "kernel_backend": kernels.BACKEND,
        },
        "documents": {
            "loaded": loaded_count,
            "skipped": len(doc_skips),
            "sampled": len(documents),
            "excluded": len(quarantine.candidate_exclusions),
            "ranked": ranked_count,
            "failed": len(quarantine.document_failures),
        },
    }
    return RunResult(
        rows=rows,
        wins=wins,
        aggregates=aggregates,
        subject_order=subject_order,
        mode_order=mode_order,
        ranked_count=ranked_count,
        quarantine=quarantine,
        manifest=manifest,
    )
