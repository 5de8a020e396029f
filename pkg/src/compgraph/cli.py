"""Command line entry points.

Exit codes: 0 success, 2 configuration error, 3 partial corpus failure
(manifest written), 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import BUNDLED_KB_PATH, load_config
from .edgar_client import EdgarClient
from .errors import CompgraphError, ConfigError, EmptyCorpus, IoError, SchemaError
from .evaluate import GroundTruth, edge_coverage, load_truth
from .graph_store import export_graph, load_graph
from .pipeline import run_pipeline

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compgraph",
                                     description="Company competition graph toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    fetch = sub.add_parser("fetch", help="download filings into the cache")
    fetch.add_argument("--cik", required=True, help="registrant id")
    fetch.add_argument("--years", required=True, help="fiscal year range, e.g. 2018..2020")
    fetch.add_argument("--cache", required=True, help="cache directory")
    fetch.add_argument("--form", default=None, help="restrict to 10-K or 10-K/A")

    run = sub.add_parser("run", help="run the pipeline over a corpus")
    run.add_argument("--config", required=True, help="key=value config file")
    run.add_argument("--dump-sections", default=None, metavar="DIR",
                     help="write per-filing item sections as JSON")
    run.add_argument("--dump-subsections", default=None, metavar="DIR",
                     help="write per-filing competition subsections as JSON")

    ev = sub.add_parser("eval", help="score a graph against ground truth")
    ev.add_argument("--graph", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--undirected", action="store_true",
                    help="collapse edge direction before scoring")

    serve_p = sub.add_parser("serve", help="serve a graph over HTTP")
    serve_p.add_argument("--graph", required=True)
    serve_p.add_argument("--port", type=int, default=8080)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--static", default=None, metavar="DIR",
                         help="also serve a UI bundle from this directory")
    serve_p.add_argument("--kb", default=str(BUNDLED_KB_PATH),
                         help="knowledge base for alias-aware /search")

    export = sub.add_parser("export", help="convert a graph file")
    export.add_argument("--graph", required=True)
    export.add_argument("--format", required=True, choices=("json", "dot", "graphml"))
    export.add_argument("--out", required=True)
    return parser


def _cmd_fetch(args) -> int:
    years = _parse_years(args.years)
    client = EdgarClient(cache_dir=args.cache)
    refs = client.list_filings(args.cik, form_type=args.form, year_range=years)
    if not refs:
        print("no filings matched")
        return EXIT_OK
    for ref in refs:
        raw = client.fetch_filing(ref)
        print(f"{ref.accession_number}  {ref.form_type}  {ref.filing_date}  "
              f"({len(raw.html)} bytes, {raw.source})")
    return EXIT_OK


def _parse_years(value: str) -> tuple[int, int]:
    try:
        if ".." in value:
            lo, hi = value.split("..", 1)
            return (int(lo), int(hi))
        return (int(value), int(value))
    except ValueError as exc:
        raise ConfigError(f"bad years {value!r}") from exc


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.dump_sections:
        config.dump_sections_dir = args.dump_sections
    if args.dump_subsections:
        config.dump_subsections_dir = args.dump_subsections
    outcome = run_pipeline(config)
    manifest = outcome.manifest
    print(f"filings: {manifest.succeeded}/{manifest.attempted} succeeded")
    print(f"graph: {len(outcome.graph.nodes)} nodes, {len(outcome.graph.edges)} edges "
          f"-> {config.output_path}")
    for failure in manifest.failures:
        print(f"  failed {failure['accession']}: {failure['error']}", file=sys.stderr)
    return EXIT_PARTIAL if manifest.failed else EXIT_OK


def _cmd_eval(args) -> int:
    graph = load_graph(args.graph)
    truth = load_truth(args.truth)
    if args.undirected and truth.mode != "undirected":
        truth = GroundTruth(edges=truth.edges, mode="undirected")
    coverage = edge_coverage(graph, truth)
    report = {
        "mode": truth.mode,
        "n_nodes": len(graph.nodes),
        "n_edges_pred": len(graph.edges),
        "n_edges_truth": len(truth.edges),
        "edge_coverage": coverage,
    }
    print(json.dumps(report, indent=1))
    print(f"\nedge coverage: {coverage:.4f} "
          f"({round(coverage * len(truth.edges))}/{len(truth.edges)}, {truth.mode})")
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .server import serve
    serve(args.graph, port=args.port, host=args.host,
          static_dir=args.static, kb_path=args.kb)
    return EXIT_OK


def _cmd_export(args) -> int:
    graph = load_graph(args.graph)
    export_graph(graph, args.format, args.out)
    print(f"wrote {args.format} export to {args.out}")
    return EXIT_OK


_COMMANDS = {
    "fetch": _cmd_fetch,
    "run": _cmd_run,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
    "export": _cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, EmptyCorpus) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IoError, SchemaError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CompgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
