"""``g2g MAPPING.g2g SOURCE`` command-line front end.

SOURCE is a SPARQL endpoint URL (http/https) or a local Turtle file.
Exit codes: 0 ok, 1 usage, 2 mapping parse/validation, 3 source, 4 output.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .endpoint import EndpointConfig
from .errors import EndpointError, G2GError, MappingError, ParseError
from .export import DIALECTS, export_db
from .g2gml import errors_only, parse_g2gml, validate
from .mapping import RunOptions, run
from .model import stats
from .pgformat import write_json_pg, write_pg
from .rdf import load_turtle

EXIT_OK, EXIT_USAGE, EXIT_MAPPING, EXIT_SOURCE, EXIT_OUTPUT = 0, 1, 2, 3, 4

log = logging.getLogger("g2g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="g2g", description="Map RDF data to a property graph with a G2GML description.")
    p.add_argument("g2g_file", help="G2GML mapping file")
    p.add_argument("source", help="SPARQL endpoint URL or local Turtle file")
    p.add_argument("-o", "--output", help="output file (pg/json) or file prefix (database formats)")
    p.add_argument("-f", "--format", default="pg", choices=("pg", "json") + DIALECTS)
    p.add_argument("--include-orphans", action="store_true",
                   help="keep nodes that no edge touches")
    p.add_argument("--timeout", type=float, help="endpoint timeout in seconds")
    p.add_argument("--page-size", type=_positive_int, help="fetch endpoint results in LIMIT/OFFSET pages")
    p.add_argument("--parallel", type=_positive_int, default=1, help="maps to query concurrently")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def is_endpoint(source: str) -> bool:
    return source.startswith(("http://", "https://"))


def _default_timeout() -> float:
    raw = os.environ.get("G2G_ENDPOINT_TIMEOUT")
    if raw:
        try:
            return float(raw)
        except ValueError:
            log.warning("ignoring non-numeric G2G_ENDPOINT_TIMEOUT=%r", raw)
    return 60.0


def _write_outputs(graph, fmt: str, output, g2g_file: str) -> None:
    if fmt in ("pg", "json"):
        text = write_pg(graph) if fmt == "pg" else write_json_pg(graph)
        if output:
            Path(output).write_text(text, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
        return
    prefix = output or Path(g2g_file).stem
    for name, content in export_db(graph, fmt).items():
        path = Path(f"{prefix}.{name}")
        path.write_text(content, encoding="utf-8", newline="\n")
        log.info("wrote %s", path)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)

    try:
        with open(args.g2g_file, encoding="utf-8") as fh:
            doc = parse_g2gml(fh.read())
    except OSError as exc:
        print(f"g2g: cannot read {args.g2g_file}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"g2g: {args.g2g_file}: {exc}", file=sys.stderr)
        return EXIT_MAPPING

    diagnostics = validate(doc)
    for d in diagnostics:
        print(f"g2g: {args.g2g_file}: {d}", file=sys.stderr)
    if errors_only(diagnostics):
        return EXIT_MAPPING

    try:
        if is_endpoint(args.source):
            timeout = args.timeout if args.timeout is not None else _default_timeout()
            source = EndpointConfig(args.source, timeout=timeout, page_size=args.page_size)
        else:
            with open(args.source, encoding="utf-8") as fh:
                source = load_turtle(fh.read())
    except (OSError, ValueError, G2GError) as exc:
        print(f"g2g: cannot load source {args.source}: {exc}", file=sys.stderr)
        return EXIT_SOURCE

    run_diags = []
    try:
        graph = run(doc, RunOptions(source, args.include_orphans, args.parallel), run_diags)
    except MappingError as exc:
        for where, err in exc.failures:
            print(f"g2g: {args.g2g_file}: {where}: {err}", file=sys.stderr)
        source_failure = any(isinstance(err, EndpointError) for _, err in exc.failures)
        return EXIT_SOURCE if source_failure else EXIT_MAPPING
    for d in run_diags:
        print(f"g2g: {d}", file=sys.stderr)

    try:
        _write_outputs(graph, args.format, args.output, args.g2g_file)
    except (OSError, G2GError) as exc:
        print(f"g2g: cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT

    nodes, edges = stats(graph)
    print(f"g2g: {nodes} nodes, {edges} edges", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
