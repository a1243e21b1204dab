#!/usr/bin/env python3
"""Render Husimi-grid CSVs (columns re, im, q) as heatmap panels.

Usage: render_husimi.py SPEC.json [--data-dir DIR]

Spec fields: kind="husimi", inputs (one CSV per panel), output (PNG),
optional titles (one per panel), optional cmap.
"""

import argparse
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from figspec import FigureError, load_spec, read_csv_columns, resolve, run


def grid_from_columns(columns, path):
    for name in ("re", "im", "q"):
        if name not in columns:
            raise FigureError(f"{path} lacks a '{name}' column")
    re = np.array(columns["re"])
    im = np.array(columns["im"])
    q = np.array(columns["q"])
    re_axis = np.unique(re)
    im_axis = np.unique(im)
    if len(re_axis) * len(im_axis) != len(q):
        raise FigureError(f"{path} is not a complete rectangular grid")
    values = np.empty((len(im_axis), len(re_axis)))
    i = np.searchsorted(im_axis, im)
    j = np.searchsorted(re_axis, re)
    values[i, j] = q
    return re_axis, im_axis, values


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("spec")
    parser.add_argument("--data-dir", default=None,
                        help="base for relative paths (default: spec dir)")
    args = parser.parse_args()
    spec = load_spec(args.spec)
    if spec["kind"] != "husimi":
        raise FigureError(f"{args.spec}: kind must be 'husimi'")
    base = args.data_dir or os.path.dirname(os.path.abspath(args.spec))

    inputs = spec["inputs"]
    titles = spec.get("titles", [""] * len(inputs))
    if len(titles) != len(inputs):
        raise FigureError("panel titles must match the input count")
    ncols = min(2, len(inputs))
    nrows = math.ceil(len(inputs) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.6 * nrows),
                             squeeze=False)
    for k, (name, title) in enumerate(zip(inputs, titles)):
        path = resolve(base, name)
        re_axis, im_axis, values = grid_from_columns(read_csv_columns(path), path)
        ax = axes[k // ncols][k % ncols]
        mesh = ax.pcolormesh(re_axis, im_axis, values, shading="auto",
                             cmap=spec.get("cmap", "inferno"))
        ax.set_aspect("equal")
        ax.set_xlabel(r"Re $\gamma$")
        ax.set_ylabel(r"Im $\gamma$")
        ax.set_title(title)
        fig.colorbar(mesh, ax=ax, label="Q")
    for k in range(len(inputs), nrows * ncols):
        axes[k // ncols][k % ncols].set_axis_off()
    fig.tight_layout()
    out_path = resolve(base, spec["output"])
    fig.savefig(out_path, dpi=spec.get("dpi", 150))
    print(out_path)


if __name__ == "__main__":
    run(main)
