"""Emit a standalone matplotlib script that renders result CSVs.

The generated script contains no numbers: it reads whatever CSV paths it is
given (default: the ones it was generated for) and picks a figure type from the
header of each file.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

KINDS = {
    "spectrum": ("t", "gap"),
    "anneal": ("T", "steps", "dist_to_opt", "unitarity_defect"),
    "trotter": ("n", "max_block_error", "total_error"),
}


def classify(header: list[str]) -> str:
    """Figure type for a CSV header; raises ValueError on missing columns."""
    cols = set(header)
    if header and header[0] == "t":
        if not {"t", "gap"} <= cols or not any(c.startswith("lambda_") for c in cols):
            raise ValueError("spectrum CSV needs t, lambda_k and gap columns")
        return "spectrum"
    if header and header[0] == "T":
        missing = set(KINDS["anneal"]) - cols
        if missing:
            raise ValueError(f"anneal CSV is missing columns {sorted(missing)}")
        return "anneal"
    if header and header[0] == "n":
        missing = set(KINDS["trotter"]) - cols
        if missing:
            raise ValueError(f"trotter CSV is missing columns {sorted(missing)}")
        return "trotter"
    raise ValueError(f"unrecognised CSV header {header}")


_TEMPLATE = '''#!/usr/bin/env python3
"""Render qcl result CSVs. Usage: python {name} [CSV ...]"""
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
DEFAULT_FILES = {files}


def read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return {{h: [float(r[k]) for r in body] for k, h in enumerate(header)}}, header


def plot_spectrum(data, header, ax):
    levels = [h for h in header if h.startswith("lambda_")]
    for h in levels[:-1]:
        ax.plot(data["t"], data[h], color="0.45", lw=1)
    ax.plot(data["t"], data[levels[-1]], color="tab:red", lw=2, label="lambda_max")
    ax.set_xlabel("t")
    ax.set_ylabel("eigenvalues of H_lin(t) on S")
    ax.legend()


def plot_anneal(data, header, ax):
    ax.semilogx(data["T"], data["dist_to_opt"], "o-")
    ax.set_xlabel("T")
    ax.set_ylabel("dist to optimal subspace")


def plot_trotter(data, header, ax):
    ax.loglog(data["n"], data["max_block_error"], "o-", label="max per-block error")
    ax.loglog(data["n"], data["total_error"], "s--", label="total error")
    ax.set_xlabel("n")
    ax.set_ylabel("operator-norm error")
    ax.legend()


def kind_of(header):
    return {{"t": "spectrum", "T": "anneal", "n": "trotter"}}[header[0]]


PLOTTERS = {{"spectrum": plot_spectrum, "anneal": plot_anneal, "trotter": plot_trotter}}


def main(argv):
    files = [Path(a) for a in argv] or [HERE / f for f in DEFAULT_FILES]
    for path in files:
        data, header = read(path)
        fig, ax = plt.subplots(figsize=(6, 4))
        PLOTTERS[kind_of(header)](data, header, ax)
        ax.set_title(path.stem)
        fig.tight_layout()
        fig.savefig(path.with_suffix(".png"), dpi=120)
        plt.close(fig)
        print(path.with_suffix(".png"))


if __name__ == "__main__":
    main(sys.argv[1:])
'''


def emit_plot_script(csv_paths, script_path) -> Path:
    """Write the plotting script next to ``script_path`` for the given CSVs."""
    script_path = Path(script_path)
    rel = []
    for p in map(Path, csv_paths):
        try:
            with p.open(newline="", encoding="utf-8") as fh:
                header = next(csv.reader(fh), [])
        except OSError as exc:
            raise FileNotFoundError(f"cannot read {p}: {exc}") from None
        classify(header)
        try:
            rel.append(str(p.resolve().relative_to(script_path.resolve().parent)))
        except ValueError:
            rel.append(str(p.resolve()))
    if not rel:
        raise ValueError("no CSV files to plot")
    script_path.write_text(_TEMPLATE.format(name=script_path.name, files=json.dumps(rel)), encoding="utf-8")
    return script_path


def find_csvs(directory) -> list[Path]:
    """CSV files in ``directory`` (recursively) with a recognised header."""
    out = []
    for p in sorted(Path(directory).rglob("*.csv")):
        with p.open(newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), [])
        try:
            classify(header)
        except ValueError:
            continue
        out.append(p)
    return out
