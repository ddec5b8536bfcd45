"""Command line entry point.

Subcommands mirror the pipeline stages: ingest (ALTO to bundles), index
(bundles to snapshot), serve (HTTP API), stats (corpus inventory), all
(ingest then index) and benchmark (normalizer throughput). Exit status is
0 on success, 1 when any document or stage failed, 2 on configuration
errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .config import ENV_CONFIG, PipelineConfig, load_config, resolve_config_path
from .errors import ConfigError
from .pipeline import RunReport, run_all, run_benchmark, run_index, run_ingest, run_stats

log = logging.getLogger("archive_lens")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archive-lens",
        description="Turn ALTO OCR into searchable, annotated documents.",
    )
    parser.add_argument(
        "-c", "--config",
        help=f"path to the TOML config (falls back to ${ENV_CONFIG})",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse, clean and emit document bundles")
    ingest.add_argument("--jobs", type=int, help="worker pool size override")

    sub.add_parser("index", help="build a search snapshot from emitted bundles")

    run_all_p = sub.add_parser("all", help="ingest then index")
    run_all_p.add_argument("--jobs", type=int, help="worker pool size override")

    sub.add_parser("stats", help="print corpus counts from the ALTO sources")

    serve = sub.add_parser("serve", help="start the HTTP search service")
    serve.add_argument("--host", help="bind address override")
    serve.add_argument("--port", type=int, help="port override")

    bench = sub.add_parser("benchmark", help="measure normalizer throughput")
    bench.add_argument("--lines", type=int, default=20000, help="synthetic line count")
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _print_report(report: RunReport) -> None:
    for stage in report.stages:
        counters = ", ".join(f"{k}={v}" for k, v in sorted(stage.counters.items()))
        log.info("stage %s: %.2fs %s", stage.name, stage.elapsed_s, counters)
    if report.totals:
        print("totals: " + ", ".join(f"{k}={report.totals[k]}" for k in sorted(report.totals)))
    for err in report.errors:
        print(f"error: {err}", file=sys.stderr)


def _finish(config: PipelineConfig, report: RunReport) -> int:
    report.write(config.output_dir / "report.json")
    _print_report(report)
    return 0 if report.ok else 1


def _cmd_stats(config: PipelineConfig) -> int:
    report = run_stats(config)
    width = max(len(k) for k in report.totals) if report.totals else 0
    for key in ("collections", "publications", "pages", "lines", "words"):
        print(f"{key:<{width}}  {report.totals.get(key, 0)}")
    for err in report.errors:
        print(f"error: {err}", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_serve(config: PipelineConfig, host: Optional[str], port: Optional[int]) -> int:
    if not config.index_dir.is_dir():
        raise ConfigError(f"index directory {config.index_dir} does not exist; run `index` first")
    import uvicorn

    from .service import create_app

    app = create_app(
        config.index_dir,
        cors_origins=config.service.cors_origins,
        max_page_size=config.service.max_page_size,
    )
    uvicorn.run(
        app,
        host=host or config.service.host,
        port=port if port is not None else config.service.port,
        log_level="info",
    )
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(resolve_config_path(args.config))
        if getattr(args, "jobs", None):
            config = replace(config, jobs=args.jobs)

        if args.command == "ingest":
            return _finish(config, run_ingest(config))
        if args.command == "index":
            return _finish(config, run_index(config))
        if args.command == "all":
            return _finish(config, run_all(config))
        if args.command == "stats":
            return _cmd_stats(config)
        if args.command == "serve":
            return _cmd_serve(config, args.host, args.port)
        if args.command == "benchmark":
            result = run_benchmark(config, n_lines=args.lines, seed=args.seed)
            print(json.dumps(result, indent=2))
            return 0
        raise AssertionError(f"unhandled command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
