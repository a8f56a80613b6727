"""One-parameter families and the structure of the acceptance set.

A family maps eps on a finite grid to a twist model. ``scan`` runs the graph
detector at every member; ``classify`` reads the accepted set as a whole
interval, isolated points, nothing, or (for patterns that fit neither)
inconclusive. Finite grids cannot decide the continuum question, so every
classification carries a "numerical evidence only" marker.
"""
from __future__ import annotations

import hashlib
import io
import json
import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .billiards import make_model
from .errors import (BranchLostError, DomainError, EscapeError, NumericError, RootNotFoundError,
                     ScanAborted)
from .geometry import DEFAULT_CUTOFF, DomainSpec, ellipse_rho_coefficients, ellipse_spec
from .parallel import pmap
from .periodic import (ACCEPT_TOL, DELTA1_TOL, NSCAN, REJECT_TOL, PeriodicGraph, Rotation,
                       _endpoint, _local_root, build_candidate_graph, in_twist_interval,
                       solve_eta)
from .twist import ShearModel, TwistModel

log = logging.getLogger(__name__)

FAMILY_KINDS = ("ellipse-eccentricity", "fourier-perturbation", "shear-toy")
EVIDENCE = "numerical evidence only"
_SOLVER_ERRORS = (BranchLostError, RootNotFoundError, EscapeError, NumericError, DomainError)


def _conj_symmetric(pairs):
    d = {}
    for k, c in pairs:
        d[int(k)] = d.get(int(k), 0) + complex(c)
    for k, c in list(d.items()):
        if abs(d.get(-k, 0) - c.conjugate()) > 1e-14 * max(1.0, abs(c)):
            raise DomainError(f"perturbation direction not conjugate-symmetric at k={k}")
    return d


def _convolve(a: dict, b: dict) -> dict:
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


@dataclass(frozen=True)
class FamilySpec:
    """A family over eps in [eps_lo, eps_hi] sampled at ``points`` values.

    ellipse-eccentricity: ellipse with a = 1, b = sqrt(1 - eps^2).
    fourier-perturbation: rho_eps = rho_base * (1 + eps * d) (multiplicative) or
    rho_base + eps * d (additive), d given by its Fourier pairs ``direction``.
    shear-toy: the shear F(q, p) = (q + p + eps, p).
    """

    kind: str
    eps_lo: float
    eps_hi: float
    points: int
    model: str = "birkhoff"
    base: DomainSpec | None = None
    direction: tuple = ()
    mode: str = "multiplicative"
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.points < 1 or not self.eps_lo <= self.eps_hi:
            raise DomainError("need eps_lo <= eps_hi and at least one grid point")
        if self.points == 1 and self.eps_lo != self.eps_hi:
            raise DomainError("a one-point grid needs eps_lo == eps_hi")
        if self.kind == "fourier-perturbation":
            if self.base is None:
                raise DomainError("fourier-perturbation needs a base domain")
            if self.mode not in ("multiplicative", "additive"):
                raise DomainError(f"unknown perturbation mode {self.mode!r}")
            d = _conj_symmetric(self.direction)
            shift = d if self.mode == "additive" else _convolve(self._base_coefficients(), d)
            if abs(shift.get(1, 0)) > 1e-14 * self._base_coefficients()[0].real:
                raise DomainError("perturbation direction has a first-harmonic component")
        if self.kind != "shear-toy":
            for eps in self.grid():
                self.domain_spec(eps).build()  # raises NotConvexError for a bad member

    def grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.eps_lo)])
        return np.linspace(self.eps_lo, self.eps_hi, self.points)

    def _base_coefficients(self) -> dict:
        b = self.base
        if b.kind == "ellipse":
            return ellipse_rho_coefficients(b.a, b.b, b.cutoff)
        return {int(k): complex(c) for k, c in b.coefficients}

    def domain_spec(self, eps: float) -> DomainSpec:
        if self.kind == "ellipse-eccentricity":
            return ellipse_spec(float(eps), normalize=self.normalize)
        if self.kind == "fourier-perturbation":
            base = self._base_coefficients()
            d = _conj_symmetric(self.direction)
            shift = d if self.mode == "additive" else _convolve(base, d)
            coeffs = dict(base)
            for k, c in shift.items():
                coeffs[k] = coeffs.get(k, 0) + eps * c
            for k in (1, -1):
                coeffs.pop(k, None)  # zero up to rounding, checked at construction
            cutoff = max(max(abs(k) for k in coeffs), self.base.cutoff)
            return DomainSpec("fourier-rho", tuple(sorted(coeffs.items())),
                              normalize=self.normalize, cutoff=cutoff)
        raise DomainError("shear-toy members are not domains")

    def model_at(self, eps: float) -> TwistModel:
        if self.kind == "shear-toy":
            return ShearModel(float(eps))
        return make_model(self.model, self.domain_spec(float(eps)).build())

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "eps_lo": self.eps_lo, "eps_hi": self.eps_hi,
             "points": self.points, "normalize": self.normalize}
        if self.kind != "shear-toy":
            d["model"] = self.model
        if self.kind == "fourier-perturbation":
            d["base"] = self.base.to_dict()
            d["mode"] = self.mode
            d["direction"] = [[int(k), complex(c).real, complex(c).imag]
                              for k, c in sorted(self.direction, key=lambda kc: kc[0])]
        return d

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def perturbed_ellipse_family(eccentricity, eps_lo, eps_hi, points, harmonic=4,
                             model="birkhoff") -> FamilySpec:
    """rho_ellipse * (1 + eps cos(harmonic * theta)), perimeter-normalized."""
    base = ellipse_spec(eccentricity)
    base = DomainSpec("ellipse", a=base.a, b=base.b, cutoff=DEFAULT_CUTOFF)
    return FamilySpec("fourier-perturbation", eps_lo, eps_hi, points, model, base,
                      ((harmonic, 0.5), (-harmonic, 0.5)))


# --------------------------------------------------------------------------
# scanning

@dataclass
class ScanRecord:
    eps: float
    sup_delta2: float
    accepted: bool
    closure_defect: float
    n_grid: int
    branches_found: int
    status: str = "rejected"
    note: str = ""

    def csv_row(self) -> str:
        return ",".join([repr(float(self.eps)), repr(float(self.sup_delta2)),
                         "true" if self.accepted else "false", repr(float(self.closure_defect)),
                         str(self.n_grid), str(self.branches_found)])


CSV_HEADER = "eps,sup_delta2,accepted,closure_defect,n_grid,branches_found"


@dataclass
class ScanResult:
    family: FamilySpec
    rotation: Rotation
    records: list
    tolerance: float = ACCEPT_TOL
    reject_threshold: float = REJECT_TOL
    graphs: dict = field(default_factory=dict, repr=False)

    @property
    def eps(self):
        return [r.eps for r in self.records]

    @property
    def flagged(self):
        return [r.eps for r in self.records if r.status == "outside-twist-interval"]

    def to_csv(self, path=None) -> str:
        text = CSV_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in self.records)
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def summary(self, cluster_tol=None) -> dict:
        c = classify(self, cluster_tol)
        return {
            "classification": c.label,
            "evidence": c.evidence,
            "warning": c.warning,
            "accepted_eps": c.accepted_eps,
            "flagged_outside_twist_interval": self.flagged,
            "branch_lost_eps": [r.eps for r in self.records if r.status == "branch-lost"],
            "rotation": [self.rotation.m, self.rotation.n],
            "tolerance": self.tolerance,
            "reject_threshold": self.reject_threshold,
            "family": self.family.to_dict(),
            "family_fingerprint": self.family.fingerprint(),
        }


def _seed_at(model, rot, prev_seed, nscan):
    if prev_seed is not None:
        try:
            return solve_eta(model, rot, 0.0, seed=prev_seed).p
        except _SOLVER_ERRORS:
            log.info("continuation seed lost, falling back to a fiber scan")
    return solve_eta(model, rot, 0.0, nscan=nscan).p


def _member_graph(family, rot, N, tol, reject, task):
    eps, seed = task
    model = family.model_at(eps)
    try:
        g = build_candidate_graph(model, rot, N, tol, reject, seed=seed, check_interval=False)
    except _SOLVER_ERRORS as exc:
        return ScanRecord(eps, math.nan, False, math.nan, N, 0, "branch-lost", str(exc)), None
    return ScanRecord(eps, g.sup_delta2, g.accepted, g.closure_defect, N, g.branches_found,
                      g.status), g


def scan(family: FamilySpec, rot: Rotation, N=256, tol=ACCEPT_TOL, reject=REJECT_TOL,
         workers=1, nscan=NSCAN, keep_graphs=False) -> ScanResult:
    """sup |delta2| over the family grid.

    A serial pass continues the q = 0 root in eps to seed every member; the
    graphs themselves are then built independently and merged in eps order.
    """
    grid = [float(e) for e in family.grid()]
    seeds, prev = {}, None
    records = {}
    for eps in grid:
        model = family.model_at(eps)
        if not in_twist_interval(model, rot):
            records[eps] = ScanRecord(eps, math.nan, False, math.nan, N, 0,
                                      "outside-twist-interval", "excluded from classification")
            continue
        try:
            prev = seeds[eps] = _seed_at(model, rot, prev, nscan)
        except _SOLVER_ERRORS as exc:
            records[eps] = ScanRecord(eps, math.nan, False, math.nan, N, 0, "branch-lost", str(exc))
            prev = None
    tasks = [(eps, seeds[eps]) for eps in grid if eps in seeds]
    out = pmap(partial(_member_graph, family, rot, N, tol, reject), tasks, workers)
    graphs = {}
    for (eps, _), (rec, g) in zip(tasks, out):
        records[eps] = rec
        if keep_graphs and g is not None:
            graphs[eps] = g
    result = ScanResult(family, rot, [records[e] for e in grid], tol, reject, graphs)
    live = [r for r in result.records if r.status != "outside-twist-interval"]
    lost = [r for r in live if r.status == "branch-lost"]
    if live and 2 * len(lost) > len(live):
        raise ScanAborted(f"branch lost at {len(lost)} of {len(live)} members", partial=result)
    return result


# --------------------------------------------------------------------------
# classification

@dataclass
class Classification:
    label: str
    accepted_eps: list
    clusters: list
    evidence: str = EVIDENCE
    warning: str | None = None

    @property
    def kind(self) -> str:
        return self.label.split(":")[0]


def _fmt(eps: float) -> str:
    return f"{eps:g}"


def classify(result: ScanResult, cluster_tol=None) -> Classification:
    """Group accepted eps into clusters and name the pattern.

    Accepted values closer than ``cluster_tol`` (default: 1.5 grid steps)
    share a cluster. Singletons separated by a single rejected member count
    as an alternating pattern and make the result inconclusive.
    """
    live = [r for r in result.records if r.status != "outside-twist-interval"]
    acc = [r.eps for r in live if r.accepted]
    if len(live) > 1:
        step = (live[-1].eps - live[0].eps) / max(1, len(result.records) - 1)
    else:
        step = 0.0
    tol = cluster_tol if cluster_tol is not None else 1.5 * step
    clusters = []
    for e in acc:
        if clusters and e - clusters[-1][-1] <= tol:
            clusters[-1].append(e)
        else:
            clusters.append([e])
    if not live:
        return Classification("empty", [], [], warning="no member inside the twist interval")
    if len(acc) == len(live):
        return Classification("whole-interval", acc, clusters)
    if not acc:
        return Classification("empty", [], [])
    if any(len(c) > 1 for c in clusters):
        return Classification("inconclusive", acc, clusters,
                              warning="accepted cluster that is not the whole interval")
    singles = [c[0] for c in clusters]
    if any(b - a <= 2 * step + 1e-12 for a, b in zip(singles, singles[1:])):
        return Classification("inconclusive", acc, clusters,
                              warning="alternating accept/reject pattern")
    label = "isolated points: [" + ", ".join(_fmt(e) for e in singles) + "]"
    return Classification(label, acc, clusters)


# --------------------------------------------------------------------------
# continuation in eps

@dataclass
class ContinuationResult:
    frontier_eps: float
    frontier_graph: PeriodicGraph
    reached: bool
    last_eps: float
    last_graph: PeriodicGraph | None
    path: list = field(default_factory=list)


def _correct_node(model, rot, node):
    q, p = node
    p = _local_root(model, rot, q, p)
    Q, P = _endpoint(model, rot, q, p)
    return p, Q - q - rot.m, P - p


def continue_graph(family: FamilySpec, rot: Rotation, eps0, graph0: PeriodicGraph, eps1, steps,
                   workers=1) -> ContinuationResult:
    """Predictor-corrector in eps: previous eta predicts, per-node root solves correct.

    Stops at the first eps where acceptance fails; that profile is returned
    alongside the frontier (last accepted) graph.
    """
    if not graph0.accepted:
        raise DomainError("continuation needs an accepted starting graph")
    current, frontier = graph0, float(eps0)
    path = [(float(eps0), graph0.sup_delta2, True)]
    for eps in np.linspace(eps0, eps1, steps + 1)[1:]:
        eps = float(eps)
        model = family.model_at(eps)
        try:
            out = pmap(partial(_correct_node, model, rot), list(zip(current.q, current.eta)), workers)
        except _SOLVER_ERRORS as exc:
            log.info("continuation stopped at eps=%g: %s", eps, exc)
            return ContinuationResult(frontier, current, False, eps, None, path)
        d1 = np.array([r[1] for r in out])
        g = PeriodicGraph(rot, current.q.copy(), np.array([r[0] for r in out]), d1,
                          np.array([r[2] for r in out]), current.tolerance,
                          current.reject_threshold, 0.0, 1, False, model.name)
        ok = g.accepted and np.max(np.abs(d1)) < DELTA1_TOL
        path.append((eps, g.sup_delta2, bool(ok)))
        if not ok:
            return ContinuationResult(frontier, current, False, eps, g, path)
        current, frontier = g, eps
    return ContinuationResult(frontier, current, True, frontier, current, path)
