#!/usr/bin/env python3
"""Desk-scale reproduction run for the fig4a data set."""

import pathlib
import sys

from paritybounds.cli import main

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "out" / "fig4a"

if __name__ == "__main__":
    sys.exit(main(["sdp", "--config", str(ROOT / "configs" / "fig4a_maxcut_sdp.json"),
                   "--out", str(OUT)] + sys.argv[1:]))
