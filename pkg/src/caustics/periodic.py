"""Detection and certification of (m, n)-periodic invariant graphs.

For a rotation m/n the candidate graph eta is the root in p of

    delta1(q, p) = Q_n(q, p) - q - m,

where (Q_n, P_n) = F^n(q, p); the graph is periodic-filled iff

    delta2(q) = P_n(q, eta(q)) - eta(q)

vanishes for every q. Roots are tracked along a uniform q-grid by
continuation from a fiber scan at q = 0.
"""
from __future__ import annotations

import io
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from scipy.optimize import brentq

from .errors import (BranchLostError, ContractError, ConvergenceError, DomainError,
                     EscapeError, RootNotFoundError, SizeError)
from .parallel import pmap
from .twist import Configuration, Orbit, TwistModel, iterate, stationarity_residual, \
    twist_interval_estimate

log = logging.getLogger(__name__)

ACCEPT_TOL = 1e-8
REJECT_TOL = 1e-6
DELTA1_TOL = 1e-10
NSCAN = 64
JUMP_FLOOR = 1e-2


@dataclass(frozen=True)
class Rotation:
    m: int
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise DomainError(f"n must be positive, got {self.n}")
        if math.gcd(self.m, self.n) != 1:
            raise DomainError(f"m = {self.m} and n = {self.n} are not coprime")

    @property
    def value(self) -> float:
        return self.m / self.n

    def __str__(self):
        return f"({self.m},{self.n})"


def twist_interval_of(model: TwistModel):
    ti = getattr(model, "_ti_cache", None)
    if ti is None:
        ti = twist_interval_estimate(model)
        model._ti_cache = ti
    return ti


def in_twist_interval(model: TwistModel, rot: Rotation) -> bool:
    ti = twist_interval_of(model)
    return ti.lower < rot.value < ti.upper


def check_rotation(model: TwistModel, rot: Rotation):
    if not in_twist_interval(model, rot):
        ti = twist_interval_of(model)
        raise DomainError(f"rotation {rot.m}/{rot.n} outside the twist interval "
                          f"({ti.lower:.4g}, {ti.upper:.4g}) of the {model.name} model")


# --------------------------------------------------------------------------
# defects

def _endpoint(model, rot, q, p):
    if not model.contains(q, p):
        raise EscapeError(0, (q, p))
    Q, P = model.iterate_n(q, p, rot.n)
    if not model.contains(Q, P):
        raise EscapeError(rot.n, (Q, P))
    return Q, P


def delta1(model: TwistModel, rot: Rotation, q: float, p: float) -> float:
    Q, _ = _endpoint(model, rot, q, p)
    return Q - q - rot.m


def delta2(model: TwistModel, rot: Rotation, q: float, p: float, tol=DELTA1_TOL) -> float:
    Q, P = _endpoint(model, rot, q, p)
    if abs(Q - q - rot.m) >= tol:
        raise ContractError(f"({q}, {p}) is not a delta1 root (|delta1| = {abs(Q - q - rot.m):.2e})")
    return P - p


def _delta1_chart(model, rot, q, u):
    return delta1(model, rot, q, model.from_chart(q, u))


def segment_action(model: TwistModel, rot: Rotation, q: float, p: float) -> float:
    """Sum of S along the n-step orbit segment starting at (q, p)."""
    orb = iterate(model, (q, p), rot.n)
    return float(sum(model.S(a, b) for a, b in zip(orb.q[:-1], orb.q[1:])))


# --------------------------------------------------------------------------
# root finding in the fiber

def fiber_roots(model: TwistModel, rot: Rotation, q: float, nscan=NSCAN, u_lo=0.0, u_hi=1.0):
    """All delta1 roots at q detected by sign changes on an nscan-point chart scan."""
    us = u_lo + (u_hi - u_lo) * (np.arange(nscan) + 0.5) / nscan
    vals = []
    for u in us:
        try:
            vals.append(_delta1_chart(model, rot, q, float(u)))
        except (DomainError, EscapeError):
            vals.append(math.nan)
    roots = []
    for j in range(nscan - 1):
        a, b = vals[j], vals[j + 1]
        if math.isnan(a) or math.isnan(b):
            continue
        if a == 0.0:
            roots.append(float(us[j]))
        elif a * b < 0:
            u = brentq(lambda v: _delta1_chart(model, rot, q, v), float(us[j]), float(us[j + 1]),
                       xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            roots.append(u)
    if vals and vals[-1] == 0.0:
        roots.append(float(us[-1]))
    return [model.from_chart(q, u) for u in roots]


@dataclass
class EtaSolution:
    p: float
    delta1: float
    roots: list = field(default_factory=list)
    ambiguous: bool = False
    selected_by: str = "continuation"


def select_root(model: TwistModel, rot: Rotation, q: float, roots, seed=None):
    """Minimal n-step action when S exists, else closest to the seed."""
    if len(roots) == 1:
        return roots[0], False, "unique"
    if model.has_generating_function:
        acts = [segment_action(model, rot, q, p) for p in roots]
        best = min(acts)
        ties = [p for p, a in zip(roots, acts) if a - best <= 1e-12 * max(1.0, abs(best))]
        if len(ties) == 1:
            return ties[0], False, "action"
        roots = ties
    if seed is not None:
        return min(roots, key=lambda p: (abs(p - seed), p)), True, "seed"
    return min(roots), True, "lowest"


def _local_root(model, rot, q, p0, tol=1e-14, maxiter=60):
    """Secant iteration in the fiber chart from p0; bracketed fallback."""
    f = partial(_delta1_chart, model, rot, q)
    u0 = min(max(model.to_chart(q, p0), 1e-12), 1 - 1e-12)
    f0 = f(u0)
    if abs(f0) <= tol:
        return model.from_chart(q, u0)
    du = 1e-7 if u0 < 0.5 else -1e-7
    u1 = u0 + du
    f1 = f(u1)
    best_u, best_f = (u0, f0) if abs(f0) < abs(f1) else (u1, f1)
    for _ in range(maxiter):
        if f1 == f0:
            break
        u2 = u1 - f1 * (u1 - u0) / (f1 - f0)
        if not 0.0 < u2 < 1.0:
            break
        u0, f0 = u1, f1
        u1, f1 = u2, f(u2)
        if abs(f1) < abs(best_f):
            best_u, best_f = u1, f1
        if abs(f1) <= tol or abs(u1 - u0) <= 1e-16:
            break
    if abs(best_f) <= DELTA1_TOL * 1e-2:
        return model.from_chart(q, best_u)
    return model.from_chart(q, _bracketed_near(f, model.to_chart(q, p0)))


def _bracketed_near(f, u0):
    u0 = min(max(u0, 1e-9), 1 - 1e-9)
    f0 = f(u0)
    delta = 1e-6
    while delta < 2.0:
        for u in (max(u0 - delta, 1e-6), min(u0 + delta, 1 - 1e-6)):
            try:
                fu = f(u)
            except (DomainError, EscapeError):
                continue
            if fu * f0 <= 0:
                a, b = sorted((u0, u))
                return brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        delta *= 2
    raise RootNotFoundError(f"no delta1 root near chart value {u0}")


def solve_eta(model: TwistModel, rot: Rotation, q: float, bracket=None, seed=None,
              nscan=NSCAN) -> EtaSolution:
    """A delta1 root at q, by local continuation from ``seed`` or by fiber scan."""
    if seed is not None and bracket is None:
        p = _local_root(model, rot, q, seed)
        return EtaSolution(p, delta1(model, rot, q, p), [p], False, "continuation")
    u_lo, u_hi = 0.0, 1.0
    if bracket is not None:
        u_lo, u_hi = sorted(model.to_chart(q, b) for b in bracket)
    roots = fiber_roots(model, rot, q, nscan, u_lo, u_hi)
    if not roots:
        raise RootNotFoundError(f"no sign change of delta1 at q={q} in chart ({u_lo}, {u_hi})")
    p, ambiguous, how = select_root(model, rot, q, roots, seed)
    if len(roots) > 1:
        log.info("q=%g rotation %s: %d delta1 roots %s, selected %r by %s",
                 q, rot, len(roots), roots, p, how)
    return EtaSolution(p, delta1(model, rot, q, p), roots, ambiguous, how)


# --------------------------------------------------------------------------
# candidate graphs

@dataclass
class PeriodicGraph:
    rotation: Rotation
    q: np.ndarray
    eta: np.ndarray
    delta1: np.ndarray
    delta2: np.ndarray
    tolerance: float = ACCEPT_TOL
    reject_threshold: float = REJECT_TOL
    closure_defect: float = 0.0
    branches_found: int = 1
    ambiguous: bool = False
    model: str = ""
    method: str = "continuation"
    branch_lost_at: float | None = None

    @property
    def N(self) -> int:
        return len(self.q)

    @property
    def sup_delta2(self) -> float:
        return float(np.max(np.abs(self.delta2)))

    @property
    def accepted(self) -> bool:
        return self.method == "continuation" and self.sup_delta2 < self.tolerance

    @property
    def status(self) -> str:
        s = self.sup_delta2
        if self.accepted:
            return "accepted"
        return "rejected" if s > self.reject_threshold else "borderline"

    def summary(self) -> dict:
        return {
            "rotation": [self.rotation.m, self.rotation.n],
            "model": self.model,
            "n_grid": self.N,
            "sup_delta2": self.sup_delta2,
            "max_abs_delta1": float(np.max(np.abs(self.delta1))),
            "accepted": self.accepted,
            "status": self.status,
            "tolerance": self.tolerance,
            "reject_threshold": self.reject_threshold,
            "closure_defect": self.closure_defect,
            "branches_found": self.branches_found,
            "ambiguous": self.ambiguous,
            "method": self.method,
            "branch_lost_at": self.branch_lost_at,
        }

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write("q,eta,delta1,delta2\n")
        for row in zip(self.q, self.eta, self.delta1, self.delta2):
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path, rotation: Rotation, **kw) -> "PeriodicGraph":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(rotation, data[:, 0], data[:, 1], data[:, 2], data[:, 3], **kw)

    def interpolate(self, q):
        """Periodic piecewise-linear interpolation of eta."""
        xs = np.append(self.q, 1.0)
        ys = np.append(self.eta, self.eta[0])
        return np.interp(np.mod(q, 1.0), xs, ys)


def _march(model, rot, qs, start_p, u_scale):
    """Continue the delta1 root along qs from start_p; returns roots (chart-checked)."""
    out = []
    prev2, prev = None, start_p
    for k, q in enumerate(qs):
        pred = prev if prev2 is None else 2 * prev - prev2
        try:
            p = _local_root(model, rot, q, pred, tol=1e-11)
        except (RootNotFoundError, DomainError, EscapeError) as exc:
            raise BranchLostError(f"root continuation failed at q={q}: {exc}", last_good=k - 1, q=float(q)) from exc
        u, u_pred = model.to_chart(q, p), model.to_chart(q, pred)
        # the linear predictor misses by O(h^2) near extrema of eta, hence the floor
        allowed = JUMP_FLOOR + (10 * abs(model.to_chart(q, prev) - model.to_chart(q, prev2))
                                if prev2 is not None else u_scale)
        if abs(u - u_pred) > allowed:
            raise BranchLostError(f"root branch jumped at q={q} (chart change {abs(u - u_pred):.3g})",
                                  last_good=k - 1, q=float(q))
        out.append(p)
        prev2, prev = prev, p
    return out


def _polish(model, rot, node):
    q, p = node
    p = _local_root(model, rot, q, p)
    Q, P = _endpoint(model, rot, q, p)
    return p, Q - q - rot.m, P - p


def build_candidate_graph(model: TwistModel, rot: Rotation, N=256, tol=ACCEPT_TOL,
                          reject_threshold=REJECT_TOL, seed=None, workers=1, nscan=NSCAN,
                          check_interval=True) -> PeriodicGraph:
    """Sample the candidate graph eta on q_i = i / N and attach its delta2 profile.

    The root at q = 0 comes from a fiber scan (or from ``seed``); the branch is
    then continued in both directions and the two marches are compared at
    q = 1/2. A second, parallelisable pass polishes every node independently.
    """
    if N < 4:
        raise SizeError("grid needs at least 4 nodes")
    if check_interval:
        check_rotation(model, rot)
    qs = np.arange(N) / N
    if seed is None:
        sol0 = solve_eta(model, rot, 0.0, nscan=nscan)
    else:
        sol0 = solve_eta(model, rot, 0.0, seed=seed)
    half = N // 2
    try:
        fwd = _march(model, rot, qs[1:half + 1], sol0.p, 0.05)
        bwd = _march(model, rot, qs[half:][::-1], sol0.p, 0.05)[::-1]
        seam = abs(model.to_chart(qs[half], fwd[-1]) - model.to_chart(qs[half], bwd[0]))
        if seam > 1e-6:
            raise BranchLostError(f"forward and backward continuation disagree at q=1/2 "
                                  f"(chart gap {seam:.3g})", last_good=half - 1, q=0.5)
    except BranchLostError as exc:
        if seed is not None:
            raise
        return _pointwise_graph(model, rot, qs, tol, reject_threshold, workers, nscan, exc)
    coarse = [sol0.p] + fwd + bwd[1:]
    polished = pmap(partial(_polish, model, rot), list(zip(qs, coarse)), workers)
    eta = np.array([r[0] for r in polished])
    d1 = np.array([r[1] for r in polished])
    d2 = np.array([r[2] for r in polished])
    if np.max(np.abs(d1)) >= DELTA1_TOL:
        raise ConvergenceError(f"delta1 not certified: max |delta1| = {np.max(np.abs(d1)):.2e}")
    closure = abs(model.to_chart(qs[half], eta[half]) - model.to_chart(qs[half], fwd[-1])) + seam
    return PeriodicGraph(rot, qs, eta, d1, d2, tol, reject_threshold, float(closure),
                         len(sol0.roots), sol0.ambiguous, model.name)


def _scan_node(model, rot, nscan, q):
    sol = solve_eta(model, rot, float(q), nscan=nscan)
    Q, P = _endpoint(model, rot, q, sol.p)
    return sol.p, Q - q - rot.m, P - sol.p, len(sol.roots), sol.ambiguous


def _pointwise_graph(model, rot, qs, tol, reject_threshold, workers, nscan, lost):
    """Per-node fiber scan with root selection, used once the branch is lost.

    When no Delta1 branch survives a full turn (coexisting chains that fold,
    as for rotation 1/2 in eccentric ellipses) the selected roots still give
    a Delta2 profile, so the rejection is quantified rather than abandoned.
    The result is never accepted: its eta need not be continuous.
    """
    log.info("rotation %s: %s; falling back to per-node root selection", rot, lost)
    rows = pmap(partial(_scan_node, model, rot, nscan), list(qs), workers)
    eta = np.array([r[0] for r in rows])
    d1 = np.array([r[1] for r in rows])
    d2 = np.array([r[2] for r in rows])
    if np.max(np.abs(d1)) >= DELTA1_TOL:
        raise ConvergenceError(f"delta1 not certified: max |delta1| = {np.max(np.abs(d1)):.2e}")
    u = np.array([model.to_chart(q, p) for q, p in zip(qs, eta)])
    jump = float(np.max(np.abs(np.diff(np.append(u, u[0])))))
    return PeriodicGraph(rot, qs, eta, d1, d2, tol, reject_threshold, jump,
                         max(r[3] for r in rows), any(r[4] for r in rows), model.name,
                         "pointwise", lost.q)


# --------------------------------------------------------------------------
# variational side

def _periodic_action(model, x, m):
    ext = np.append(x, x[0] + m)
    return float(sum(model.S(a, b) for a, b in zip(ext[:-1], ext[1:])))


def _admissible(model, x, m):
    ext = np.append(x, x[0] + m)
    return all(model.in_generating_domain(a, b) for a, b in zip(ext[:-1], ext[1:]))


def _gradient(model, x, rot):
    return stationarity_residual(model, Configuration(x, rot.m, rot.n))


def find_minimal_orbit(model: TwistModel, rot: Rotation, seed, descent_steps=200,
                       newton_steps=50, tol=1e-10) -> Configuration:
    """Minimize the periodic action from a monotone seed, then Newton-polish."""
    if not model.has_generating_function:
        raise DomainError(f"{model.name} has no generating function")
    x = np.asarray(seed, dtype=float).copy()
    if len(x) != rot.n or not _admissible(model, x, rot.m):
        raise DomainError("seed must be an admissible monotone (m, n)-periodic configuration")
    for attempt in range(3):
        x = _descend(model, rot, x, descent_steps)
        y = _newton(model, rot, x, newton_steps, tol)
        if y is not None:
            return Configuration(y, rot.m, rot.n)
        descent_steps *= 4
    raise ConvergenceError("minimal orbit search did not reach the stationarity tolerance")


def _descend(model, rot, x, steps):
    w = _periodic_action(model, x, rot.m)
    t = 0.1
    for _ in range(steps):
        g = _gradient(model, x, rot)
        gg = float(g @ g)
        if math.sqrt(gg) < 1e-6:
            break
        while t > 1e-14:
            y = x - t * g
            if _admissible(model, y, rot.m) and np.all(np.diff(y) > 0):
                wy = _periodic_action(model, y, rot.m)
                if wy <= w - 1e-4 * t * gg:
                    x, w = y, wy
                    t *= 2
                    break
            t *= 0.5
        else:
            break
    return x


def _newton(model, rot, x, steps, tol, h=1e-6):
    for _ in range(steps):
        r = _gradient(model, x, rot)
        if np.max(np.abs(r)) < tol:
            return x
        J = np.empty((rot.n, rot.n))
        for j in range(rot.n):
            e = np.zeros(rot.n)
            e[j] = h
            J[:, j] = (_gradient(model, x + e, rot) - _gradient(model, x - e, rot)) / (2 * h)
        dx = np.linalg.lstsq(J, -r, rcond=1e-10)[0]
        y = x + dx
        while not (_admissible(model, y, rot.m) and np.all(np.diff(y) > 0)):
            dx *= 0.5
            y = x + dx
            if np.max(np.abs(dx)) < 1e-16:
                return None
        x = y
    r = _gradient(model, x, rot)
    return x if np.max(np.abs(r)) < tol else None


def orbit_of_configuration(model: TwistModel, config: Configuration) -> Orbit:
    """Phase points over one period: p_k = -d1 S(q_k, q_{k+1})."""
    qs = np.append(config.q, config.q[0] + config.m) if config.periodic else config.q
    ps = [-model.dS(a, b)[0] for a, b in zip(qs[:-1], qs[1:])]
    return Orbit(np.asarray(qs[:-1]), np.array(ps))


# --------------------------------------------------------------------------
# certification

@dataclass
class ConjugateIndicator:
    k: int
    l: int
    value: float


def conjugate_point_check(model: TwistModel, orbit: Orbit, span: int, h=1e-6):
    """d/dp of the q-component of F^(l-k) at x_k for 0 < l - k <= span."""
    out = []
    for k in range(len(orbit)):
        q, p = orbit.point(k)
        for j in range(1, span + 1):
            if k + j >= len(orbit):
                break
            hp = h * max(1.0, abs(p))
            v = (model.iterate_n(q, p + hp, j)[0] - model.iterate_n(q, p - hp, j)[0]) / (2 * hp)
            out.append(ConjugateIndicator(k, k + j, v))
    return out


def no_conjugate_points(indicators, threshold=1e-8) -> bool:
    return all(abs(c.value) > threshold for c in indicators)


@dataclass
class LipschitzEstimate:
    constant: float
    inf_twist: float | None = None


def lipschitz_estimate(graph: PeriodicGraph, model: TwistModel | None = None) -> LipschitzEstimate:
    eta = np.append(graph.eta, graph.eta[0])
    const = float(np.max(np.abs(np.diff(eta))) * graph.N)
    inf_twist = None
    if model is not None:
        vals = [abs((model.step(q, p + 1e-6 * max(1.0, abs(p)))[0]
                     - model.step(q, p - 1e-6 * max(1.0, abs(p)))[0]) / (2e-6 * max(1.0, abs(p))))
                for q, p in zip(graph.q, graph.eta)]
        inf_twist = float(min(vals))
    return LipschitzEstimate(const, inf_twist)


MAX_SEGMENT = 5


def minimality_check(model: TwistModel, config: Configuration, M=40, tol=1e-12) -> bool:
    """Fixed-endpoint action of the segment against a brute-force grid.

    Interior points range over M equally spaced values strictly between the
    endpoints, in increasing order; pairs outside the generating-function
    domain are not admissible competitors.
    """
    if not model.has_generating_function:
        raise DomainError(f"{model.name} has no generating function")
    q = np.asarray(config.q, dtype=float)
    steps = len(q) - 1
    if steps > MAX_SEGMENT:
        raise SizeError(f"segment of {steps} steps exceeds the brute-force limit {MAX_SEGMENT}")
    if steps <= 1:
        return True
    own = float(sum(model.S(a, b) for a, b in zip(q[:-1], q[1:])))
    a, b = q[0], q[-1]
    nodes = np.concatenate([[a], a + (b - a) * np.arange(1, M + 1) / (M + 1), [b]])
    K = len(nodes)
    table = np.full((K, K), np.inf)
    for i in range(K):
        for j in range(i + 1, K):
            if model.in_generating_domain(nodes[i], nodes[j]):
                table[i, j] = model.S(nodes[i], nodes[j])
    combos = np.array(list(itertools.combinations(range(1, M + 1), steps - 1)), dtype=int)
    idx = np.column_stack([np.zeros(len(combos), dtype=int), combos,
                           np.full(len(combos), K - 1, dtype=int)])
    totals = table[idx[:, :-1], idx[:, 1:]].sum(axis=1)
    return bool(own <= totals.min() + tol)


def invariance_residual(model: TwistModel, graph: PeriodicGraph) -> float:
    """max_i |P - eta_interp(Q)| with (Q, P) = F(q_i, eta_i)."""
    worst = 0.0
    for q, p in zip(graph.q, graph.eta):
        Q, P = model.step(q, p)
        worst = max(worst, abs(P - float(graph.interpolate(Q))))
    return float(worst)


def uniqueness_spread(model: TwistModel, rot: Rotation, N=64, n_seeds=5, workers=1):
    """Max deviation between graphs continued from fiber seeds spread over the chart."""
    graphs = []
    for j in range(n_seeds):
        u = (j + 0.5) / n_seeds
        graphs.append(build_candidate_graph(model, rot, N, seed=model.from_chart(0.0, u),
                                            workers=workers, check_interval=False))
    base = graphs[0].eta
    spread = max(float(np.max(np.abs(g.eta - base))) for g in graphs)
    return spread, graphs


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | None
    threshold: float | None
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "detail": self.detail}


@dataclass
class CertificationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failing(self):
        return [c.name for c in self.checks if not c.passed]

    def as_dict(self):
        return {"passed": self.passed, "failing": self.failing,
                "checks": [c.as_dict() for c in self.checks]}


INVARIANCE_TOL = 1e-6
INVARIANCE_MIN_GRID = 256
INVARIANCE_MAX_GRID = 8192


def invariance_check(model: TwistModel, graph: PeriodicGraph, grid=None, workers=1):
    """Invariance residual on a grid of at least 256 nodes.

    With ``grid`` unset the grid is doubled until the residual, which is
    dominated by the O(h^2) interpolation error for curved graphs, drops below
    the tolerance or the grid reaches INVARIANCE_MAX_GRID.
    """
    n = grid or max(INVARIANCE_MIN_GRID, graph.N)
    while True:
        g = graph if n == graph.N else build_candidate_graph(
            model, graph.rotation, n, graph.tolerance, workers=workers, check_interval=False)
        res = invariance_residual(model, g)
        if grid is not None or res < INVARIANCE_TOL or n >= INVARIANCE_MAX_GRID:
            return res, n
        n *= 2


def certify(model: TwistModel, graph: PeriodicGraph, invariance_grid=None, n_seeds=5,
            uniqueness_grid=64, M=40, segment=3, nodes=8, workers=1) -> CertificationReport:
    """Invariance, conjugate points, Lipschitz bound, uniqueness and minimality."""
    if not graph.accepted:
        raise ContractError(f"graph not accepted (sup |delta2| = {graph.sup_delta2:.3e})")
    rot = graph.rotation
    checks = []

    inv, n_inv = invariance_check(model, graph, invariance_grid, workers)
    checks.append(CheckResult("invariance", inv < INVARIANCE_TOL, inv, INVARIANCE_TOL,
                              f"linear interpolation, grid N={n_inv}"))

    picks = np.linspace(0, graph.N, nodes, endpoint=False).astype(int)
    worst = math.inf
    for i in picks:
        orb = iterate(model, (graph.q[i], graph.eta[i]), rot.n)
        ind = conjugate_point_check(model, orb, rot.n)
        worst = min(worst, min(abs(c.value) for c in ind))
    checks.append(CheckResult("conjugate_points", bool(worst > 1e-8), worst, 1e-8, "min |indicator|"))

    lip = lipschitz_estimate(graph, model)
    checks.append(CheckResult("lipschitz", math.isfinite(lip.constant), lip.constant, None,
                              f"inf dQ/dp on graph = {lip.inf_twist:.6g}"))

    spread, _ = uniqueness_spread(model, rot, uniqueness_grid, n_seeds, workers)
    checks.append(CheckResult("uniqueness", bool(spread < 1e-8), spread, 1e-8, f"{n_seeds} fiber seeds"))

    if model.has_generating_function:
        ok = True
        for i in picks:
            orb = iterate(model, (graph.q[i], graph.eta[i]), segment)
            ok &= minimality_check(model, Configuration(orb.q), M)
        checks.append(CheckResult("minimality", bool(ok), None, None,
                                  f"{segment}-step segments, M={M}, {len(picks)} nodes"))
    else:
        checks.append(CheckResult("minimality", True, None, None,
                                  "not applicable: model has no generating function"))
    return CertificationReport(checks)
