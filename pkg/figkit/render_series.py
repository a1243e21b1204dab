#!/usr/bin/env python3
"""Render time-series CSVs as stacked line-plot panels.

Usage: render_series.py SPEC.json [--data-dir DIR]

Spec fields: kind="series", inputs (CSV list), output (PNG), x (shared
x column name), optional xlabel, panels: each panel has a ylabel and a
series list of {"input": index, "column": name, "label": optional}.
Series without an explicit label fall back to the CSV's .meta.json
(u_ab_percent or kappa/n fields) and then to the column name.  All
plotted CSVs must share an identical x grid.
"""

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from figspec import (FigureError, load_spec, read_csv_columns, read_meta,
                     resolve, run)


def series_label(entry, meta):
    if "label" in entry:
        return entry["label"]
    pct = meta.get("u_ab_percent")
    if pct is not None:
        return f"u_ab = {pct:g}% U"
    return entry["column"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("spec")
    parser.add_argument("--data-dir", default=None,
                        help="base for relative paths (default: spec dir)")
    args = parser.parse_args()
    spec = load_spec(args.spec)
    if spec["kind"] != "series":
        raise FigureError(f"{args.spec}: kind must be 'series'")
    panels = spec.get("panels", [])
    if not panels or any(not panel.get("series") for panel in panels):
        raise FigureError("spec needs at least one panel with series entries")
    base = args.data_dir or os.path.dirname(os.path.abspath(args.spec))
    x_name = spec.get("x", "t")

    tables = []
    metas = []
    for name in spec["inputs"]:
        path = resolve(base, name)
        columns = read_csv_columns(path)
        if x_name not in columns:
            raise FigureError(f"{path} lacks the x column '{x_name}'")
        tables.append(columns)
        metas.append(read_meta(path))
    x0 = np.array(tables[0][x_name])
    for name, table in zip(spec["inputs"][1:], tables[1:]):
        if not np.array_equal(np.array(table[x_name]), x0):
            raise FigureError(f"time grid of {name} differs from {spec['inputs'][0]}")

    fig, axes = plt.subplots(len(panels), 1,
                             figsize=(6.4, 2.6 * len(panels)),
                             sharex=True, squeeze=False)
    for ax, panel in zip(axes[:, 0], panels):
        for entry in panel["series"]:
            idx = entry.get("input", 0)
            if not 0 <= idx < len(tables):
                raise FigureError(f"series input index {idx} out of range")
            column = entry["column"]
            if column not in tables[idx]:
                raise FigureError(
                    f"{spec['inputs'][idx]} lacks the column '{column}'")
            y = np.array(tables[idx][column])
            ax.plot(x0, y, lw=1.1, label=series_label(entry, metas[idx]))
        ax.set_ylabel(panel.get("ylabel", ""))
        if panel.get("logy"):
            ax.set_yscale("log")
        ax.grid(alpha=0.25)
    axes[0, 0].legend(fontsize=7, ncol=2, loc="best")
    axes[-1, 0].set_xlabel(spec.get("xlabel", x_name))
    if "title" in spec:
        axes[0, 0].set_title(spec["title"])
    fig.tight_layout()
    out_path = resolve(base, spec["output"])
    fig.savefig(out_path, dpi=spec.get("dpi", 150))
    print(out_path)


if __name__ == "__main__":
    run(main)
