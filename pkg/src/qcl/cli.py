"""``qcl`` command line.

    qcl {validate,spectrum,anneal,qaoa,end2end} --config PATH [--out DIR] [--seed INT] [--tol NAME=VALUE ...]
    qcl plot [--out DIR] [CSV ...]

Exit codes: 0 ok, 2 config error, 3 validation failure, 4 budget exhausted, 5 I/O
error (1 for other numerical failures).
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import TOL
from .errors import ConfigError
from .harness import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    MODES,
    emit_plot_script,
    find_csvs,
    load_config,
    resolve_out_dir,
    run,
)


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    name = name.strip()
    if name not in TOL.names():
        raise argparse.ArgumentTypeError(f"unknown tolerance {name!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value {value!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcl", description="Convergence experiments for QAOA and quantum annealing.")
    sub = ap.add_subparsers(dest="command", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run a {mode} experiment")
        p.add_argument("--config", required=True, help="experiment config or run manifest (JSON)")
        p.add_argument("--out", help="output directory (default: $QCL_OUT_DIR/<mode>)")
        p.add_argument("--seed", type=int, help="seed for randomized checks (overrides config)")
        p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE",
                       help="override a numerical tolerance (repeatable)")
    p = sub.add_parser("plot", help="write a matplotlib script for result CSVs")
    p.add_argument("csv", nargs="*", help="CSV files (default: every result CSV under --out)")
    p.add_argument("--out", help="directory holding results; the script is written here")
    return ap


def _plot(args) -> int:
    out = Path(args.out or os.environ.get("QCL_OUT_DIR", "qcl_out"))
    files = [Path(c) for c in args.csv] or find_csvs(out)
    if not files:
        print(f"qcl: no result CSVs found under {out}", file=sys.stderr)
        return EXIT_IO
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = emit_plot_script(files, out / "plot_results.py")
    except FileNotFoundError as exc:
        print(f"qcl: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"qcl: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "plot":
        return _plot(args)
    try:
        cfg = load_config(args.config, mode=args.command)
    except ConfigError as exc:
        print(f"qcl: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg.seed = args.seed
    for name, value in args.tol:
        cfg.tolerances[name] = value
    result = run(cfg, resolve_out_dir(cfg, args.out))
    stream = sys.stdout if result.exit_code == EXIT_OK else sys.stderr
    print(f"qcl {args.command}: {result.message} -> {result.out_dir}", file=stream)
    return result.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
