"""Shared helpers for the figure scripts: spec loading and CSV access.

A figure spec is a small JSON file:

    {
      "kind": "husimi" | "series",
      "inputs": ["fig1a_husimi.csv", ...],      # resolved vs --data-dir
      "output": "fig1.png",
      ...layout fields (see render_husimi.py / render_series.py)
    }

The scripts are read-only consumers: every number they draw exists
verbatim in a CSV or its sibling .meta.json.
"""

import json
import os
import sys


class FigureError(Exception):
    pass


def load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise FigureError(f"cannot load figure spec {path}: {exc}")
    for key in ("kind", "inputs", "output"):
        if key not in spec:
            raise FigureError(f"figure spec {path} is missing '{key}'")
    if not spec["inputs"]:
        raise FigureError(f"figure spec {path} lists no inputs")
    return spec


def resolve(base_dir, name):
    return name if os.path.isabs(name) else os.path.join(base_dir, name)


def read_csv_columns(path):
    """Header-checked CSV -> dict of float column arrays."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = [line.rstrip("\n") for line in handle if line.strip()]
    except OSError as exc:
        raise FigureError(f"cannot read {path}: {exc}")
    if not lines:
        raise FigureError(f"{path} is empty")
    header = lines[0].split(",")
    if any(not name or name[0].isdigit() or name[0] == "-" for name in header):
        raise FigureError(f"{path} has a malformed header row: {lines[0]!r}")
    columns = {name: [] for name in header}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise FigureError(f"{path}:{lineno}: expected {len(header)} cells")
        for name, cell in zip(header, cells):
            try:
                columns[name].append(float(cell))
            except ValueError:
                raise FigureError(f"{path}:{lineno}: not a number: {cell!r}")
    return columns


def read_meta(csv_path):
    meta_path = os.path.splitext(csv_path)[0] + ".meta.json"
    if not os.path.exists(meta_path):
        return {}
    with open(meta_path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def run(main):
    try:
        main()
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
    sys.exit(0)
