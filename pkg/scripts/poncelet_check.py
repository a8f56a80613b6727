#!/usr/bin/env python3
"""Compare the (1,3) graph of an ellipse with the confocal-caustic oracle.

    python scripts/poncelet_check.py --e 0.5 --grid 256
"""
import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from caustics import Rotation, build_candidate_graph, ellipse, make_model  # noqa: E402
from oracles import Ellipse, poncelet_caustic, poncelet_closure, poncelet_sigma  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--e", type=float, default=0.5)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--samples", type=int, default=8)
    args = ap.parse_args()

    b = math.sqrt(1 - args.e ** 2)
    g = build_candidate_graph(make_model("birkhoff", ellipse(1.0, b)), Rotation(args.m, args.n), args.grid)
    ell = Ellipse(1.0, b)
    lam = poncelet_caustic(ell, args.m, args.n)
    print(f"e={args.e} rotation ({args.m},{args.n}) N={args.grid}: status {g.status}, "
          f"sup|delta2| = {g.sup_delta2:.3e}, caustic parameter {lam:.12f}")
    worst = 0.0
    for i in range(0, g.N, max(1, g.N // args.samples)):
        ref = poncelet_sigma(ell, lam, g.q[i])
        gap = poncelet_closure(ell, lam, args.n, g.q[i])
        worst = max(worst, abs(g.eta[i] - ref))
        print(f"  q={g.q[i]:.5f}  eta={g.eta[i]:+.12f}  oracle={ref:+.12f}  closure={gap:.1e}")
    print(f"max |eta - oracle| = {worst:.2e}")
    return 0 if g.accepted and worst < 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main())
