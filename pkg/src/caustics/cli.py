"""caustics <kind> --config <path> [--workers N] [--out DIR]

Exit status: 0 on success, 2 on solver non-convergence or a failed
certification check, 3 on a config error or an unmet precondition.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from functools import partial
from pathlib import Path

import numpy as np

from . import periodic
from .billiards import make_model
from .config import KINDS, ExperimentConfig, load_config
from .errors import (ConfigError, ContractError, DomainError, EscapeError, NumericError,
                     ScanAborted)
from .family import classify, scan
from .parallel import pmap
from .plots import portrait_svg, scan_svg
from .twist import ShearModel, twist_interval_estimate

log = logging.getLogger("caustics")

EXIT_OK, EXIT_SOLVER, EXIT_CONFIG = 0, 2, 3


class CheckFailed(Exception):
    pass


def _clean(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        return _clean(x.item())
    return x


def write_json(path: Path, data: dict):
    path.write_text(json.dumps(_clean(data), sort_keys=True, indent=2) + "\n")


def build_model(cfg: ExperimentConfig):
    if cfg.model == "shear":
        return ShearModel(cfg.shear.get("eps", 0.0), cfg.shear.get("sign", 1))
    return make_model(cfg.model, cfg.domain.build())


def _portrait_orbit(model, iterates, seed):
    q, p = seed
    pts = [(q, p)]
    for _ in range(iterates):
        try:
            q, p = model.step(q, p)
        except (DomainError, NumericError):
            break
        if not model.contains(q, p):
            break
        pts.append((q, p))
    return pts


def run_phase_portrait(cfg, out: Path, workers):
    model = build_model(cfg)
    opt = cfg.portrait
    k = opt.orbits
    seeds = [(0.0, model.from_chart(0.0, opt.pad + (1 - 2 * opt.pad) * j / max(1, k - 1)))
             for j in range(k)]
    orbits = pmap(partial(_portrait_orbit, model, opt.iterates), seeds, workers)
    lines = ["orbit,k,q,p"]
    for i, orb in enumerate(orbits):
        for j, (q, p) in enumerate(orb):
            lines.append(f"{i},{j},{float(q) % 1.0!r},{float(p)!r}")
    text = "\n".join(lines) + "\n"
    (out / "portrait.csv").write_text(text)
    (out / "portrait.svg").write_text(portrait_svg(text, f"{model.name} phase portrait"))
    return {"orbits": k, "iterates": opt.iterates,
            "points": sum(len(o) for o in orbits)}


def run_twist_interval(cfg, out: Path, workers):
    model = build_model(cfg)
    ti = twist_interval_estimate(model, cfg.numerics.margin)
    lines = ["margin,lower,upper"] + [f"{m!r},{lo!r},{hi!r}" for m, lo, hi in ti.schedule]
    (out / "twist_interval.csv").write_text("\n".join(lines) + "\n")
    return {"lower": ti.lower, "upper": ti.upper, "margin": ti.margin,
            "extrapolated": list(ti.extrapolated), "monotone": ti.monotone, "warning": ti.warning}


def _graph(cfg, workers):
    model = build_model(cfg)
    num = cfg.numerics
    g = periodic.build_candidate_graph(model, cfg.rotation, num.grid, num.tolerance,
                                       num.reject_threshold, workers=workers, nscan=num.fiber_scan)
    return model, g


def run_find_graph(cfg, out: Path, workers):
    _, g = _graph(cfg, workers)
    g.to_csv(out / "graph.csv")
    return g.summary()


def run_certify(cfg, out: Path, workers):
    model, g = _graph(cfg, workers)
    if not g.accepted:
        raise ContractError(f"graph rejected (sup |delta2| = {g.sup_delta2:.3e}); nothing to certify")
    g.to_csv(out / "graph.csv")
    num = cfg.numerics
    report = periodic.certify(model, g, num.invariance_grid, num.seeds, num.uniqueness_grid,
                              num.minimality_grid, num.segment, workers=workers)
    summary = {"graph": g.summary(), "certification": report.as_dict()}
    if not report.passed:
        raise CheckFailed(summary)
    return summary


def run_scan_family(cfg, out: Path, workers):
    num = cfg.numerics
    try:
        result = scan(cfg.family, cfg.rotation, num.grid, num.tolerance, num.reject_threshold,
                      workers, num.fiber_scan)
    except ScanAborted as exc:
        if exc.partial is not None:
            exc.partial.to_csv(out / "scan.csv")
        raise
    text = result.to_csv(out / "scan.csv")
    (out / "scan.svg").write_text(scan_svg(text, f"{cfg.family.kind}, rotation {cfg.rotation}"))
    summary = result.summary()
    summary["classification_detail"] = classify(result).warning
    return summary


RUNNERS = {
    "phase-portrait": run_phase_portrait,
    "twist-interval": run_twist_interval,
    "find-graph": run_find_graph,
    "scan-family": run_scan_family,
    "certify": run_certify,
}


def run(kind: str, config_path, workers=1, out_dir=None) -> int:
    """Run one experiment; always leaves a summary.json in the output directory."""
    out = Path(out_dir) if out_dir else None
    summary = {"kind": kind}
    status = EXIT_OK
    try:
        cfg = load_config(config_path, kind)
        out = out or Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        summary["config"] = cfg.describe()
        summary["result"] = RUNNERS[kind](cfg, out, workers)
    except ConfigError as exc:
        status, summary["error"] = EXIT_CONFIG, {"type": "config", "message": str(exc)}
    except (ContractError, DomainError) as exc:
        status, summary["error"] = EXIT_CONFIG, {"type": "precondition", "message": str(exc)}
    except CheckFailed as exc:
        result = exc.args[0]
        failing = result["certification"]["failing"]
        status = EXIT_SOLVER
        summary["result"] = result
        summary["error"] = {"type": "check-failed", "message": "failing checks: " + ", ".join(failing)}
    except (NumericError, EscapeError, ScanAborted) as exc:
        status, summary["error"] = EXIT_SOLVER, {"type": "solver", "message": str(exc)}
    summary["exit_status"] = status
    if out is None:
        out = Path("caustics-out")
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "summary.json", summary)
    except OSError as exc:
        print(f"caustics: cannot write summary: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if "error" in summary:
        print(f"caustics {kind}: {summary['error']['message']}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="caustics", description="Periodic invariant graphs of "
                                 "twist maps and billiards.")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("--config", required=True, help="INI experiment file")
    ap.add_argument("--workers", type=int, default=1, help="process count (default 1)")
    ap.add_argument("--out", default=None, help="output directory (overrides [output] dir)")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.workers < 1:
        ap.error("--workers must be at least 1")
    return run(args.kind, args.config, args.workers, args.out)


if __name__ == "__main__":
    sys.exit(main())
