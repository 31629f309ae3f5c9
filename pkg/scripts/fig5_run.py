#!/usr/bin/env python3
"""Desk-scale reproduction run for the fig5 data set."""

import pathlib
import sys

from paritybounds.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "fig5"

if __name__ == "__main__":
    sys.exit(main(["evt", "--config", str(ROOT / "configs" / "fig5_evt_curves.json"),
                   "--out", str(OUT)] + sys.argv[1:]))
