"""Exact symplectic twist maps on the lifted annulus.

A model is a map F(q, p) = (Q, P), 1-periodic in q, defined on
{p_minus(q) < p < p_plus(q)}, with p -> Q(q, p) strictly monotone. Models
may carry a generating function S(q, Q) with p = -d1 S and P = d2 S.

Every model also exposes a fiber chart u in (0, 1) -> p. Samples near the
annulus boundary are taken in this chart so that models with unbounded
fibers (outer billiards) are handled the same way as bounded ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTwistError, DomainError, EscapeError

FD_STEP = 1e-5
MIXED_STEP = 1e-5
MARGIN_SCHEDULE = (1e-2, 1e-3, 1e-4)


class TwistModel:
    name = "twist"
    twist_sign = 1
    has_generating_function = False

    def step(self, q: float, p: float) -> tuple[float, float]:
        raise NotImplementedError

    def iterate_n(self, q: float, p: float, n: int) -> tuple[float, float]:
        for _ in range(n):
            q, p = self.step(q, p)
        return q, p

    def lower(self, q: float) -> float:
        raise NotImplementedError

    def upper(self, q: float) -> float:
        raise NotImplementedError

    def from_chart(self, q: float, u: float) -> float:
        lo, hi = self.lower(q), self.upper(q)
        return lo + u * (hi - lo)

    def to_chart(self, q: float, p: float) -> float:
        lo, hi = self.lower(q), self.upper(q)
        return (p - lo) / (hi - lo)

    def contains(self, q: float, p: float) -> bool:
        return self.lower(q) < p < self.upper(q)

    # generating function, when available
    def S(self, q: float, Q: float) -> float:
        raise NotImplementedError(f"{self.name} has no generating function")

    def dS(self, q: float, Q: float) -> tuple[float, float]:
        raise NotImplementedError(f"{self.name} has no generating function")

    def in_generating_domain(self, q: float, Q: float) -> bool:
        raise NotImplementedError(f"{self.name} has no generating function")

    def describe(self) -> dict:
        return {"model": self.name}


class ShearModel(TwistModel):
    """F(q, p) = (q + sign*p + eps, p) on R x (0, 1)."""

    name = "shear"
    has_generating_function = True

    def __init__(self, eps=0.0, sign=1):
        if sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        self.eps = float(eps)
        self.twist_sign = sign

    def step(self, q, p):
        return q + self.twist_sign * p + self.eps, p

    def iterate_n(self, q, p, n):
        # same arithmetic as repeated steps, kept explicit for bit-reproducibility
        for _ in range(n):
            q = q + self.twist_sign * p + self.eps
        return q, p

    def lower(self, q):
        return 0.0

    def upper(self, q):
        return 1.0

    def S(self, q, Q):
        d = Q - q - self.eps
        return self.twist_sign * 0.5 * d * d

    def dS(self, q, Q):
        d = self.twist_sign * (Q - q - self.eps)
        return -d, d

    def in_generating_domain(self, q, Q):
        return 0.0 < self.twist_sign * (Q - q - self.eps) < 1.0

    def describe(self):
        return {"model": self.name, "eps": self.eps, "sign": self.twist_sign}


@dataclass
class Orbit:
    q: np.ndarray
    p: np.ndarray

    def __len__(self):
        return len(self.q)

    def point(self, k):
        return float(self.q[k]), float(self.p[k])


@dataclass
class Configuration:
    """Base coordinates (q_k); if periodic, q_{k+n} = q_k + m."""

    q: np.ndarray
    m: int | None = None
    n: int | None = None

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        if self.periodic and len(self.q) != self.n:
            raise DomainError(f"periodic configuration needs {self.n} entries, got {len(self.q)}")

    @property
    def periodic(self) -> bool:
        return self.n is not None

    def extended(self) -> np.ndarray:
        """q_{-1}, q_0, ..., q_n for periodic data; q itself otherwise."""
        if not self.periodic:
            return self.q
        return np.concatenate([[self.q[-1] - self.m], self.q, [self.q[0] + self.m]])


def iterate(model: TwistModel, x0, n: int) -> Orbit:
    q, p = map(float, x0)
    if not model.contains(q, p):
        raise EscapeError(0, (q, p))
    qs, ps = [q], [p]
    for k in range(1, n + 1):
        q, p = model.step(q, p)
        if not model.contains(q, p):
            raise EscapeError(k, (q, p))
        qs.append(q)
        ps.append(p)
    return Orbit(np.array(qs), np.array(ps))


def _pairs_checked(model, qs):
    if not model.has_generating_function:
        raise DomainError(f"{model.name} has no generating function")
    for a, b in zip(qs[:-1], qs[1:]):
        if not model.in_generating_domain(a, b):
            raise DomainError(f"pair ({a}, {b}) outside the generating-function domain")


def stationarity_residual(model: TwistModel, config: Configuration) -> np.ndarray:
    """d2 S(q_{k-1}, q_k) + d1 S(q_k, q_{k+1}) at interior (or all periodic) k."""
    qs = config.extended()
    if len(qs) < 3:
        return np.empty(0)
    _pairs_checked(model, qs)
    d = [model.dS(a, b) for a, b in zip(qs[:-1], qs[1:])]
    return np.array([d[k - 1][1] + d[k][0] for k in range(1, len(qs) - 1)])


def action(model: TwistModel, config: Configuration) -> float:
    qs = config.q if not config.periodic else np.append(config.q, config.q[0] + config.m)
    _pairs_checked(model, qs)
    return float(sum(model.S(a, b) for a, b in zip(qs[:-1], qs[1:])))


def phase_grid(model: TwistModel, nq=32, nu=32, pad=0.05):
    """(q, p) samples on an nq x nu grid, fibers sampled in the chart."""
    pts = []
    for i in range(nq):
        q = i / nq
        for j in range(nu):
            u = pad + (1 - 2 * pad) * j / (nu - 1)
            pts.append((q, model.from_chart(q, u)))
    return pts


def check_exactness(model: TwistModel, samples, h=FD_STEP) -> float:
    """max |p + d1 S(q, Q)|, |P - d2 S(q, Q)| over samples, by central differences."""
    worst = 0.0
    for q, p in samples:
        Q, P = model.step(q, p)
        d1 = (model.S(q + h, Q) - model.S(q - h, Q)) / (2 * h)
        d2 = (model.S(q, Q + h) - model.S(q, Q - h)) / (2 * h)
        worst = max(worst, abs(p + d1), abs(P - d2))
    return worst


@dataclass
class TwistRelation:
    max_residual: float
    sign: str
    consistent: bool


def fiber_derivative(model: TwistModel, q, p, n=1, h=FD_STEP) -> float:
    """d/dp of the q-component of F^n at (q, p), central difference."""
    return (model.iterate_n(q, p + h, n)[0] - model.iterate_n(q, p - h, n)[0]) / (2 * h)


def check_twist_relation(model: TwistModel, samples, h=FD_STEP, hm=MIXED_STEP) -> TwistRelation:
    """Compare the mixed partial of S with -1/(dQ/dp); both finite-differenced."""
    worst = 0.0
    signs = set()
    consistent = True
    for q, p in samples:
        dqdp = fiber_derivative(model, q, p, 1, h)
        if abs(dqdp) < 1e-12:
            raise DegenerateTwistError(f"|dQ/dp| = {abs(dqdp):.2e} at ({q}, {p})")
        Q, _ = model.step(q, p)
        mixed = (model.S(q + hm, Q + hm) - model.S(q + hm, Q - hm)
                 - model.S(q - hm, Q + hm) + model.S(q - hm, Q - hm)) / (4 * hm * hm)
        worst = max(worst, abs(mixed + 1.0 / dqdp))
        signs.add(1 if dqdp > 0 else -1)
        consistent &= (mixed < 0) == (dqdp > 0)
    sign = "positive" if signs == {1} else "negative" if signs == {-1} else "mixed"
    return TwistRelation(worst, sign, consistent and sign != "mixed")


def check_periodicity(model: TwistModel, samples) -> float:
    worst = 0.0
    for q, p in samples:
        Q0, P0 = model.step(q, p)
        Q1, P1 = model.step(q + 1.0, p)
        worst = max(worst, math.hypot(Q1 - Q0 - 1.0, P1 - P0))
    return worst


def check_monotone_twist(model: TwistModel, nq=16, nu=64, pad=1e-3) -> bool:
    """p -> Q(q, p) strictly monotone on sampled fibers, same sense everywhere."""
    senses = set()
    for i in range(nq):
        q = i / nq
        us = np.linspace(pad, 1 - pad, nu)
        Qs = np.array([model.step(q, model.from_chart(q, u))[0] for u in us])
        d = np.diff(Qs)
        if np.all(d > 0):
            senses.add(1)
        elif np.all(d < 0):
            senses.add(-1)
        else:
            return False
    return len(senses) == 1


@dataclass
class TwistInterval:
    lower: float
    upper: float
    margin: float
    schedule: list = field(default_factory=list)
    monotone: bool = True

    @property
    def warning(self) -> str | None:
        return None if self.monotone else "non-monotone trend across margins"

    @property
    def extrapolated(self) -> tuple[float, float]:
        """Linear (Richardson) extrapolation to margin 0 from the two smallest margins."""
        (m1, lo1, hi1), (m2, lo2, hi2) = self.schedule[-2:]
        w = m2 / (m1 - m2)
        return lo2 - w * (lo1 - lo2), hi2 - w * (hi1 - hi2)


def _side_values(model, margin, nq):
    lo_vals, hi_vals = [], []
    for i in range(nq):
        q = i / nq
        lo_vals.append(model.step(q, model.from_chart(q, margin))[0] - q)
        hi_vals.append(model.step(q, model.from_chart(q, 1.0 - margin))[0] - q)
    if model.twist_sign > 0:
        return max(lo_vals), min(hi_vals)
    return max(hi_vals), min(lo_vals)


def twist_interval_estimate(model: TwistModel, margin=1e-3, nq=64,
                            schedule=MARGIN_SCHEDULE) -> TwistInterval:
    """Rotation numbers trapped between the boundary behaviours of the map.

    The lower end is the largest displacement Q - q found at chart distance
    ``margin`` from the lower boundary, the upper end the smallest one at the
    same distance from the upper boundary (sides swap for negative twist).
    """
    rows = [(m, *_side_values(model, m, nq)) for m in sorted(set(schedule), reverse=True)]
    lows = [r[1] for r in rows]
    highs = [r[2] for r in rows]
    monotone = all(b <= a + 1e-12 for a, b in zip(lows, lows[1:])) and \
        all(b >= a - 1e-12 for a, b in zip(highs, highs[1:]))
    lo, hi = _side_values(model, margin, nq)
    return TwistInterval(lo, hi, margin, rows, monotone)
