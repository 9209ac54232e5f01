"""Report emission: per-document rows, aggregate tables, win counts.

The aggregate table carries one row per subject (Given Summary, Best
Summary, one per model) with WIL/METEOR/WER/BERTScore-F1 columns; the
BLEU/ROUGE detail table carries BLEU-3/BLEU-4 plus recall/precision/F1 for
each ROUGE variant; the win table counts how often each model's candidate
was selected.

All emitters are byte-stable for identical inputs: no timestamps, fixed
column orders, fixed float formatting. CSV output is RFC-4180 (CRLF line
endings via the csv module).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from summarank.errors import DataError
from summarank.metrics import METRIC_COLUMNS
from summarank.pipeline import SUBJECT_BEST, SUBJECT_GIVEN, RunResult

AGGREGATE_COLUMNS = ("wil", "meteor", "wer", "bertscore_f1")
BLEU_ROUGE_COLUMNS = (
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
)

_SUBJECT_LABELS = {SUBJECT_GIVEN: "Given Summary", SUBJECT_BEST: "Best Summary"}


def subject_label(subject: str) -> str:
    return _SUBJECT_LABELS.get(subject, subject)


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _markdown_table(header: list[str], rows: list[list[str]]) -> str:
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def _csv_bytes(header: list[str], rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_rows_csv(result: RunResult) -> str:
    header = ["doc_id", "mode", "subject", "model", *METRIC_COLUMNS]
    rows = []
    for row in result.rows:
        flat = row.report.as_flat_dict()
        rows.append(
            [row.doc_id, row.mode, row.subject, row.model]
            + [_fmt(flat[c]) for c in METRIC_COLUMNS]
        )
    return _csv_bytes(header, rows)


def _aggregate_rows(result: RunResult, columns: tuple[str, ...]) -> list[list[str]]:
    rows = []
    for mode in result.mode_order:
        per_subject = result.aggregates.get(mode, {})
        for subject in result.subject_order:
            metrics = per_subject.get(subject)
            if metrics is None:
                continue
            rows.append(
                [mode, subject_label(subject)] + [_fmt(metrics[c]) for c in columns]
            )
    return rows


def render_aggregates_csv(result: RunResult) -> str:
    return _csv_bytes(
        ["mode", "subject", *AGGREGATE_COLUMNS], _aggregate_rows(result, AGGREGATE_COLUMNS)
    )


def render_aggregates_md(result: RunResult) -> str:
    return _markdown_table(
        ["mode", "subject", *AGGREGATE_COLUMNS], _aggregate_rows(result, AGGREGATE_COLUMNS)
    )


def render_bleu_rouge_csv(result: RunResult) -> str:
    return _csv_bytes(
        ["mode", "subject", *BLEU_ROUGE_COLUMNS],
        _aggregate_rows(result, BLEU_ROUGE_COLUMNS),
    )


def render_bleu_rouge_md(result: RunResult) -> str:
    return _markdown_table(
        ["mode", "subject", *BLEU_ROUGE_COLUMNS],
        _aggregate_rows(result, BLEU_ROUGE_COLUMNS),
    )


def _win_rows(result: RunResult) -> list[list[str]]:
    return [[model, str(count)] for model, count in sorted(result.wins.items())]


def render_wins_csv(result: RunResult) -> str:
    return _csv_bytes(["model", "wins"], _win_rows(result))


def render_wins_md(result: RunResult) -> str:
    return _markdown_table(["model", "wins"], _win_rows(result))


def render_aggregates_json(result: RunResult) -> str:
    document = {
        "aggregates": result.aggregates,
        "wins": result.wins,
        "ranked_documents": result.ranked_count,
        "subjects": [subject_label(s) for s in result.subject_order],
    }
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def render_manifest_json(result: RunResult) -> str:
    manifest = dict(result.manifest)
    manifest["quarantine"] = {
        "document_skips": [
            {"location": s.location, "reason": s.reason}
            for s in result.quarantine.document_skips
        ],
        "candidate_exclusions": [
            {"location": s.location, "reason": s.reason}
            for s in result.quarantine.candidate_exclusions
        ],
        "document_failures": [
            {"location": s.location, "reason": s.reason}
            for s in result.quarantine.document_failures
        ],
    }
    return json.dumps(manifest, ensure_ascii=False, indent=2) + "\n"


def emit_report(
    result: RunResult, output_dir: str | Path, formats: tuple[str, ...] = ("csv",)
) -> list[Path]:
    """Write all report files for ``result`` and return their paths.

    rows.csv and run_manifest.json are always written; the selected formats
    add aggregates/bleu_rouge/wins as CSV and markdown tables or a single
    aggregates.json document.
    """
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output dir {output_dir}: {exc}") from exc

    artifacts: list[tuple[str, str]] = [("rows.csv", render_rows_csv(result))]
    if "csv" in formats:
        artifacts.append(("aggregates.csv", render_aggregates_csv(result)))
        artifacts.append(("bleu_rouge.csv", render_bleu_rouge_csv(result)))
        artifacts.append(("wins.csv", render_wins_csv(result)))
    if "markdown" in formats:
        artifacts.append(("aggregates.md", render_aggregates_md(result)))
        artifacts.append(("bleu_rouge.md", render_bleu_rouge_md(result)))
        artifacts.append(("wins.md", render_wins_md(result)))
    if "json" in formats:
        artifacts.append(("aggregates.json", render_aggregates_json(result)))
    artifacts.append(("run_manifest.json", render_manifest_json(result)))

    written: list[Path] = []
    for name, content in artifacts:
        target = output_dir / name
        try:
            target.write_text(content, encoding="utf-8", newline="")
        except OSError as exc:
            raise DataError(f"cannot write {target}: {exc}") from exc
        written.append(target)
    return written
