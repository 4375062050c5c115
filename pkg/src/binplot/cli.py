"""Batch command-line interface.

Exit codes: 0 success, 1 I/O failure, 2 design validation violation
(every violated rule is printed with its reason), 3 data error (CSV
parsing, missing columns, class ceiling).  Output files are written in
one shot after rendering succeeds, never partially.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import (
    ConfigError,
    CsvParseError,
    MissingColumnError,
    PointOutOfDomainError,
    TooManyClassesError,
)
from .io import load_config, load_csv, reorder_classes
from .layout import compose, validate
from .render_svg import render
from .tasks import format_matrix

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_DATA = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="binplot",
        description="Aggregate labeled 2D points into bin lattices and render SVG designs.",
    )
    parser.add_argument(
        "--list-designs",
        action="store_true",
        help="print the design-vs-task guidance matrix and exit",
    )
    sub = parser.add_subparsers(dest="command")

    rend = sub.add_parser("render", help="render one dataset with one design config")
    rend.add_argument("--data", required=True, help="CSV file with x, y, and class columns")
    rend.add_argument("--config", required=True, help="JSON design config")
    rend.add_argument("--out", default=None, help="output SVG path")
    rend.add_argument("--seed", type=int, default=None, help="override the config's seed")
    rend.add_argument("--workers", type=int, default=1, help="parallel fill encoding threads")
    rend.add_argument(
        "--serve",
        type=int,
        default=None,
        metavar="PORT",
        help="after rendering, serve the dataset for interactive exploration",
    )

    serve = sub.add_parser("serve", help="run the HTTP design-explorer service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--persist", default=None, help="directory for dataset CSV snapshots")
    return parser


def _cmd_render(args) -> int:
    if args.out is None and args.serve is None:
        print("error: --out and/or --serve is required", file=sys.stderr)
        return EXIT_IO
    try:
        spec, ingest = load_config(args.config)
    except FileNotFoundError:
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    columns = ingest.columns
    try:
        dataset = load_csv(args.data, columns["x"], columns["y"], columns["class"])
        if ingest.class_order:
            dataset = reorder_classes(dataset, ingest.class_order)
    except FileNotFoundError:
        print(f"error: data file not found: {args.data}", file=sys.stderr)
        return EXIT_IO
    except (CsvParseError, MissingColumnError, TooManyClassesError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_VALIDATION

    violations = validate(spec, dataset)
    if violations:
        print("design rejected:", file=sys.stderr)
        for v in violations:
            print(f"  {v.rule}: {v.reason}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.out is not None:
        try:
            document = render(compose(dataset, spec, workers=max(1, args.workers)))
        except PointOutOfDomainError as err:
            print(f"data error: {err}", file=sys.stderr)
            return EXIT_DATA
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(document)
        except OSError as err:
            print(f"error: cannot write {args.out}: {err}", file=sys.stderr)
            return EXIT_IO
    if args.serve is not None:
        import uvicorn

        from .service import create_app

        app = create_app()
        app.state.store.add(dataset, name=args.data)
        uvicorn.run(app, host="127.0.0.1", port=args.serve, log_level="warning")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(persist_dir=args.persist)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_designs:
        print(format_matrix())
        return EXIT_OK
    if args.command == "render":
        return _cmd_render(args)
    if args.command == "serve":
        return _cmd_serve(args)
    parser.print_help()
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
