#!/usr/bin/env python3
"""Desk-scale reproduction run for the fig2 data set."""

import pathlib
import sys

from paritybounds.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "fig2"

if __name__ == "__main__":
    sys.exit(main(["sweep", "--config", str(ROOT / "configs" / "fig2_scaling_sweep.json"),
                   "--out", str(OUT)] + sys.argv[1:]))
