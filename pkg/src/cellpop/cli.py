"""Command-line entry points: serve the API, export figures, run statistics.

Exit codes: 0 success; 2 no datasets; 3 dataset load error; 4 invalid
config; 5 unsupported output extension; 6 port already in use.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from .errors import CellpopError, DatasetLoadError, InvalidConfigError
from .ingest import load_dataset_path
from .ingest.discover import discover_datasets
from .ingest.tables import (
    aggregate_cell_table,
    assemble_dataset,
    parse_cells_csv,
    parse_counts_csv,
)
from .model import default_config, merge_config_patch
from .render.model import build_render_model
from .render.svg import render_svg
from .stats import summary_to_csv, unique_type_summary
from .transform import apply_view

EXIT_OK = 0
EXIT_NO_DATASETS = 2
EXIT_LOAD_ERROR = 3
EXIT_INVALID_CONFIG = 4
EXIT_BAD_EXTENSION = 5
EXIT_PORT_IN_USE = 6

DEFAULT_PORT = 8000
SERVE_HOST = "127.0.0.1"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellpop",
        description="Cell population views: serve, export, and summarize.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--data", required=True, help="directory of dataset subdirectories")
    serve.add_argument("--port", type=int, default=None,
                       help="listen port (default: CELLPOP_PORT or 8000)")

    export = sub.add_parser("export", help="render one dataset to SVG or PNG")
    export.add_argument("--data", required=True,
                        help="dataset directory, counts.csv, or cells.csv")
    export.add_argument("--config", required=True,
                        help="JSON file with a (possibly partial) view config")
    export.add_argument("--out", required=True, help="output .svg or .png path")
    export.add_argument("--scale", type=int, default=2,
                        help="PNG scale factor over the 1200x900 base")

    stats = sub.add_parser("stats", help="write the unique-cell-type summary CSV")
    stats.add_argument("--data", required=True, help="directory of dataset subdirectories")
    stats.add_argument("--out", required=True, help="output CSV path")
    return parser


def _load_data_dir(data_dir: str):
    try:
        datasets = discover_datasets(data_dir)
    except DatasetLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_LOAD_ERROR
    if not datasets:
        print(f"error: no datasets found under {data_dir}", file=sys.stderr)
        return None, EXIT_NO_DATASETS
    return datasets, EXIT_OK


def _port_available(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind((host, port))
        except OSError:
            return False
    return True


def _cmd_serve(args: argparse.Namespace) -> int:
    datasets, code = _load_data_dir(args.data)
    if datasets is None:
        return code
    for name, dataset in datasets.items():
        rows = len(dataset.counts.row_ids)
        cols = len(dataset.counts.col_ids)
        print(f"{name}: {rows} samples × {cols} cell types")
    port = args.port
    if port is None:
        port = int(os.environ.get("CELLPOP_PORT", str(DEFAULT_PORT)))
    if not _port_available(SERVE_HOST, port):
        print(f"error: port {port} is already in use", file=sys.stderr)
        return EXIT_PORT_IN_USE

    import uvicorn

    from .service import create_app

    ui_dir = os.environ.get("CELLPOP_UI_DIR")
    app = create_app(datasets, ui_dir=ui_dir)
    uvicorn.run(app, host=SERVE_HOST, port=port, log_level="warning")
    return EXIT_OK


def _load_single_dataset(path_text: str):
    path = Path(path_text)
    if path.is_dir():
        return load_dataset_path(path)
    text = path.read_text(encoding="utf-8")
    if path.name == "cells.csv":
        counts = aggregate_cell_table(parse_cells_csv(text))
    else:
        counts = parse_counts_csv(text)
    return assemble_dataset(
        counts, name=path.stem, source_descriptor=str(path)
    )


def _cmd_export(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if out.suffix not in (".svg", ".png"):
        print(f"error: unsupported output extension {out.suffix!r} "
              "(use .svg or .png)", file=sys.stderr)
        return EXIT_BAD_EXTENSION
    try:
        dataset = _load_single_dataset(args.data)
    except (CellpopError, OSError, ValueError) as exc:
        print(f"error: {args.data}: {exc}", file=sys.stderr)
        return EXIT_LOAD_ERROR
    try:
        patch = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(patch, dict):
            print("error: config file must hold a JSON object", file=sys.stderr)
            return EXIT_INVALID_CONFIG
        config = merge_config_patch(dataset, default_config(dataset), patch)
    except InvalidConfigError as exc:
        print("error: invalid config:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  {violation}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    view = apply_view(dataset, config)
    model = build_render_model(view, config)
    if out.suffix == ".svg":
        out.write_bytes(render_svg(model, 1200, 900))
    else:
        from .raster import render_png

        out.write_bytes(render_png(model, scale=args.scale))
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    datasets, code = _load_data_dir(args.data)
    if datasets is None:
        return code
    summary = unique_type_summary(list(datasets.values()))
    Path(args.out).write_text(summary_to_csv(summary), encoding="utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "export":
        return _cmd_export(args)
    return _cmd_stats(args)


if __name__ == "__main__":
    sys.exit(main())
