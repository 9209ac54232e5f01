"""Command-line front end.

Subcommands: rank (per-document ranking), eval (score one pair), run (full
corpus pipeline with report files), stats (win counts only), report
(re-render tables from a rows.csv). Exit codes: 0 success, 1 configuration
error, 2 data error, 3 provider error. Diagnostics go to stderr; stdout is
machine-parseable under --format json.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from summarank import __version__, report as report_mod
from summarank.embedding import DEFAULT_DIM, ProviderConfig, make_provider
from summarank.errors import ConfigError, DataError, ProviderError
from summarank.metrics import METRIC_COLUMNS, MetricReport, evaluate_pair
from summarank.pipeline import (
    COMPARISON_MODES,
    EvaluationRow,
    QuarantineReport,
    RunConfig,
    RunResult,
    load_candidates,
    load_documents,
    run_corpus,
)
from summarank.ranking import PageRankConfig, rank_candidates
from summarank.text_prep import normalize

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3

ENDPOINT_ENV_VAR = "SUMMARANK_ENDPOINT"


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the config error code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("embedding provider")
    group.add_argument("--provider", choices=("local", "http"), default="local")
    group.add_argument(
        "--endpoint",
        default=None,
        help=f"HTTP provider base URL (falls back to ${ENDPOINT_ENV_VAR})",
    )
    group.add_argument("--dim", type=int, default=DEFAULT_DIM)


def _add_pagerank_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pagerank")
    group.add_argument("--damping", type=float, default=0.85)
    group.add_argument("--tolerance", type=float, default=1e-8)
    group.add_argument("--max-iterations", type=int, default=200)


def _provider_config(args: argparse.Namespace) -> ProviderConfig:
    if args.provider == "local":
        return ProviderConfig(kind="local", dim=args.dim)
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV_VAR)
    if not endpoint:
        raise ConfigError(
            f"--provider http requires --endpoint or ${ENDPOINT_ENV_VAR}"
        )
    return ProviderConfig(kind="remote", dim=args.dim, endpoint=endpoint)


def _pagerank_config(args: argparse.Namespace) -> PageRankConfig:
    return PageRankConfig(
        damping=args.damping,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
    )


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"{what} file not found: {path}")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="summarank", description=__doc__)
    parser.add_argument("--version", action="version", version=f"summarank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank candidates per document")
    p_rank.add_argument("--documents", required=True)
    p_rank.add_argument("--candidates", required=True)
    p_rank.add_argument("--format", choices=("text", "json"), default="text")
    _add_provider_flags(p_rank)
    _add_pagerank_flags(p_rank)

    p_eval = sub.add_parser("eval", help="score one hypothesis/target pair")
    hyp = p_eval.add_mutually_exclusive_group(required=True)
    hyp.add_argument("--hyp", help="hypothesis text")
    hyp.add_argument("--hyp-file", help="file containing the hypothesis text")
    target = p_eval.add_mutually_exclusive_group(required=True)
    target.add_argument("--target", help="target text (reference or source)")
    target.add_argument("--target-file", help="file containing the target text")
    p_eval.add_argument("--format", choices=("text", "json"), default="text")
    _add_provider_flags(p_eval)

    p_run = sub.add_parser("run", help="full corpus run with report files")
    p_run.add_argument("--documents", required=True)
    p_run.add_argument("--candidates", required=True)
    p_run.add_argument("--sample-k", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument(
        "--modes", choices=("vs_text", "vs_reference", "both"), default="both"
    )
    p_run.add_argument("--out", default="out")
    p_run.add_argument(
        "--format",
        default="csv",
        help="comma-separated subset of csv,json,markdown (default: csv)",
    )
    p_run.add_argument("--workers", type=int, default=1)
    _add_provider_flags(p_run)
    _add_pagerank_flags(p_run)

    p_stats = sub.add_parser("stats", help="win counts per model")
    p_stats.add_argument("--documents", required=True)
    p_stats.add_argument("--candidates", required=True)
    p_stats.add_argument("--format", choices=("text", "json"), default="text")
    _add_provider_flags(p_stats)
    _add_pagerank_flags(p_stats)

    p_report = sub.add_parser("report", help="re-render tables from a rows.csv")
    p_report.add_argument("--rows", required=True)
    p_report.add_argument("--out", default="out")
    p_report.add_argument(
        "--format",
        default="csv",
        help="comma-separated subset of csv,json,markdown (default: csv)",
    )

    return parser


def _iter_ranked(args: argparse.Namespace):
    """Yield (doc, candidate set, rank result) over a corpus."""
    documents, doc_skips = load_documents(_require_file(args.documents, "documents"))
    for skip in doc_skips:
        print(f"skipped {skip.location}: {skip.reason}", file=sys.stderr)
    candidate_sets, exclusions = load_candidates(
        _require_file(args.candidates, "candidates"),
        known_ids={d.id for d in documents},
    )
    for excl in exclusions:
        print(f"excluded {excl.location}: {excl.reason}", file=sys.stderr)
    provider = make_provider(_provider_config(args))
    pagerank_cfg = _pagerank_config(args)
    for doc in documents:
        cand = candidate_sets.get(doc.id)
        if cand is None:
            print(f"excluded {doc.id}: no candidates", file=sys.stderr)
            continue
        rank = rank_candidates(
            doc.reference,
            [c.summary for c in cand.candidates],
            provider,
            pagerank_cfg,
            model_ids=list(cand.model_ids),
        )
        yield doc, cand, rank


def cmd_rank(args: argparse.Namespace) -> int:
    for doc, cand, rank in _iter_ranked(args):
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "doc_id": doc.id,
                        "best_model": rank.best_model_id,
                        "best_index": rank.best_index,
                        "scores": list(rank.scores),
                        "similarities": list(rank.similarities),
                        "ordering": list(rank.ordering),
                        "models": list(cand.model_ids),
                        "iterations": rank.iterations_used,
                        "converged": rank.converged,
                    },
                    ensure_ascii=False,
                )
            )
        else:
            sims = ", ".join(
                f"{model}={sim:.4f}"
                for model, sim in zip(cand.model_ids, rank.similarities)
            )
            scores = ", ".join(f"{s:.4f}" for s in rank.scores)
            print(f"{doc.id}: best={rank.best_model_id}")
            print(f"  similarities: {sims}")
            print(f"  pagerank scores: [{scores}] ({rank.iterations_used} iterations)")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    hyp = args.hyp if args.hyp is not None else _require_file(
        args.hyp_file, "hypothesis"
    ).read_text(encoding="utf-8")
    target = args.target if args.target is not None else _require_file(
        args.target_file, "target"
    ).read_text(encoding="utf-8")
    if not normalize(hyp) or not normalize(target):
        raise DataError("hypothesis and target must be nonempty after normalization")
    provider = make_provider(_provider_config(args))
    report = evaluate_pair(hyp, target, provider)
    flat = report.as_flat_dict()
    if args.format == "json":
        print(json.dumps(flat, ensure_ascii=False))
    else:
        for key in METRIC_COLUMNS:
            print(f"{key}: {flat[key]:.6f}")
    return EXIT_OK


def _parse_formats(value: str) -> tuple[str, ...]:
    formats = tuple(part.strip() for part in value.split(",") if part.strip())
    if not formats:
        raise ConfigError("at least one output format is required")
    return formats


def cmd_run(args: argparse.Namespace) -> int:
    modes = COMPARISON_MODES if args.modes == "both" else (args.modes,)
    cfg = RunConfig(
        documents_path=str(_require_file(args.documents, "documents")),
        candidates_path=str(_require_file(args.candidates, "candidates")),
        provider=_provider_config(args),
        pagerank=_pagerank_config(args),
        sample_k=args.sample_k,
        seed=args.seed,
        comparison_modes=modes,
        output_dir=args.out,
        output_formats=_parse_formats(args.format),
        workers=args.workers,
    )
    result = run_corpus(cfg)
    written = report_mod.emit_report(result, cfg.output_dir, cfg.output_formats)
    quarantined = result.quarantine.total
    if quarantined:
        print(f"quarantined {quarantined} records (see run_manifest.json)", file=sys.stderr)
    wins = ", ".join(f"{model}={count}" for model, count in sorted(result.wins.items()))
    print(
        f"ranked {result.ranked_count} documents; wins: {wins}; "
        f"outputs: {', '.join(str(p) for p in written)}"
    )
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    wins: dict[str, int] = {}
    ranked = 0
    for _doc, cand, rank in _iter_ranked(args):
        for model_id in cand.model_ids:
            wins.setdefault(model_id, 0)
        wins[rank.best_model_id] += 1
        ranked += 1
    if args.format == "json":
        print(json.dumps({"ranked": ranked, "wins": wins}, ensure_ascii=False))
    else:
        print(f"ranked {ranked} documents")
        for model, count in sorted(wins.items()):
            print(f"{model}: {count}")
    return EXIT_OK


def _result_from_rows(rows_path: Path) -> RunResult:
    """Rebuild an aggregate-ready RunResult from a previously written rows.csv."""
    import csv as csv_mod

    from summarank.pipeline import SUBJECT_BEST, SUBJECT_GIVEN, _aggregate

    try:
        content = rows_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read rows file {rows_path}: {exc}") from exc
    reader = csv_mod.DictReader(content.splitlines())
    if reader.fieldnames is None or set(METRIC_COLUMNS) - set(reader.fieldnames):
        raise DataError(f"{rows_path} does not look like a summarank rows.csv")

    rows: list[EvaluationRow] = []
    mode_order: list[str] = []
    model_order: list[str] = []
    wins: dict[str, int] = {}
    best_seen: set[str] = set()
    for record in reader:
        try:
            flat = {c: float(record[c]) for c in METRIC_COLUMNS}
        except (TypeError, ValueError) as exc:
            raise DataError(f"malformed metric value in {rows_path}: {exc}") from exc
        row = EvaluationRow(
            doc_id=record["doc_id"],
            mode=record["mode"],
            subject=record["subject"],
            model=record["model"],
            report=MetricReport.from_flat_dict(flat),
        )
        rows.append(row)
        if row.mode not in mode_order:
            mode_order.append(row.mode)
        if row.subject not in (SUBJECT_GIVEN, SUBJECT_BEST):
            if row.subject not in model_order:
                model_order.append(row.subject)
                wins.setdefault(row.subject, 0)
        elif row.subject == SUBJECT_BEST and row.doc_id not in best_seen:
            best_seen.add(row.doc_id)
            wins[row.model] = wins.get(row.model, 0) + 1

    subject_order = [SUBJECT_GIVEN, SUBJECT_BEST, *model_order]
    aggregates = _aggregate(rows, mode_order, subject_order)
    manifest = {
        "config": {"rerendered_from": str(rows_path)},
        "seed": None,
        "versions": {"summarank": __version__},
        "documents": {"ranked": len(best_seen)},
    }
    return RunResult(
        rows=rows,
        wins=wins,
        aggregates=aggregates,
        subject_order=subject_order,
        mode_order=mode_order,
        ranked_count=len(best_seen),
        quarantine=QuarantineReport(),
        manifest=manifest,
    )


def cmd_report(args: argparse.Namespace) -> int:
    result = _result_from_rows(_require_file(args.rows, "rows"))
    written = report_mod.emit_report(result, args.out, _parse_formats(args.format))
    print(f"re-rendered {len(written)} files into {args.out}")
    return EXIT_OK


_COMMANDS = {
    "rank": cmd_rank,
    "eval": cmd_eval,
    "run": cmd_run,
    "stats": cmd_stats,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ProviderError as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
