#!/usr/bin/env python3
"""Desk-scale reproduction run for the fig3 data set."""

import pathlib
import sys

from paritybounds.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "fig3"

if __name__ == "__main__":
    sys.exit(main(["ensemble", "--config", str(ROOT / "configs" / "fig3_sk_ensemble.json"),
                   "--out", str(OUT)] + sys.argv[1:]))
