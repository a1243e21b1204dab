#!/usr/bin/env python3
"""Produce the four reference figures end to end.

Runs the simulator CLI on every config in configs/ (through its public
command-line interface only), then renders the four figure specs from the
emitted CSVs.  Exits nonzero on the first failing step.

Usage: run_all.py [--workdir DIR] [--skip-simulation]
"""

import argparse
import os
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
REPO = os.path.dirname(HERE)

RUNS = [
    ("husimi", "fig1a.ini"),
    ("husimi", "fig1b.ini"),
    ("husimi", "fig1c.ini"),
    ("husimi", "fig1d.ini"),
    ("cat", "fig1a.ini"),
    ("decohere", "fig2.ini"),
    ("evolve", "fig3.ini"),
]

SPECS = [
    ("render_husimi.py", "fig1.json"),
    ("render_series.py", "fig2.json"),
    ("render_series.py", "fig3.json"),
    ("render_series.py", "fig4.json"),
]


def call(cmd):
    print("+", " ".join(cmd))
    proc = subprocess.run(cmd)
    if proc.returncode != 0:
        print(f"step failed with exit code {proc.returncode}", file=sys.stderr)
        sys.exit(proc.returncode)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default=os.path.join(REPO, "out"),
                        help="where CSVs and PNGs land (default: ./out)")
    parser.add_argument("--skip-simulation", action="store_true",
                        help="render only, reusing existing CSVs")
    args = parser.parse_args()
    os.makedirs(args.workdir, exist_ok=True)

    if not args.skip_simulation:
        for subcommand, config in RUNS:
            call([sys.executable, "-m", "twomodebec", subcommand,
                  os.path.join(REPO, "configs", config),
                  "--out", args.workdir])
    for script, spec in SPECS:
        call([sys.executable, os.path.join(HERE, script),
              os.path.join(HERE, "specs", spec),
              "--data-dir", args.workdir])
    print("all figures rendered in", args.workdir)


if __name__ == "__main__":
    main()
