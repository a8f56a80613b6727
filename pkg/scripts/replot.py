#!/usr/bin/env python3
"""Regenerate an SVG from a portrait.csv or scan.csv without recomputing."""
import argparse
from pathlib import Path

from caustics.plots import portrait_svg, scan_svg

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", type=Path)
    ap.add_argument("--title", default=None)
    args = ap.parse_args()
    text = args.csv.read_text()
    header = text.split("\n", 1)[0]
    render = portrait_svg if header.startswith("orbit,") else scan_svg
    out = args.csv.with_suffix(".svg")
    out.write_text(render(text, args.title or args.csv.parent.name))
    print(out)
