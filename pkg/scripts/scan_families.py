#!/usr/bin/env python3
"""Run the three shipped family scans through the CLI into one directory."""
import argparse
import json
import sys
from pathlib import Path

from caustics.cli import main as cli

ROOT = Path(__file__).resolve().parents[1]
SCANS = ["scan_ellipse_12", "scan_ellipse_13", "scan_perturbed_13"]

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/scans")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    status = 0
    for name in SCANS:
        out = Path(args.out) / name
        code = cli(["scan-family", "--config", str(ROOT / "configs" / f"{name}.ini"),
                    "--workers", str(args.workers), "--out", str(out)])
        res = json.loads((out / "summary.json").read_text()).get("result", {})
        print(f"{name:20s} exit {code}  {res.get('classification')}  ({res.get('evidence')})")
        status = max(status, code)
    sys.exit(status)
