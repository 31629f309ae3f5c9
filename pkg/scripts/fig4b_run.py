#!/usr/bin/env python3
"""Desk-scale reproduction run for the fig4b data set."""

import pathlib
import sys

from paritybounds.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "fig4b"

if __name__ == "__main__":
    sys.exit(main(["ensemble", "--config", str(ROOT / "configs" / "fig4b_minbisection.json"),
                   "--out", str(OUT)] + sys.argv[1:]))
