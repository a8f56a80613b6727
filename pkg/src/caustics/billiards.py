"""Birkhoff, outer and symplectic billiards as twist models.

Coordinates, all with base period 1:

* Birkhoff: (s, sigma), s the arclength fraction, sigma = -cos(phi) with
  phi in (0, pi) the angle between the outgoing chord and the tangent.
* outer: (theta / 2pi, r_env), theta the tangent angle at the tangency point
  and r_env half the squared distance from the tangency point.
* symplectic: (t, s1), t = theta / 2pi and s1 = omega(gamma'(t1), gamma(t2)),
  where gamma is the boundary relative to the domain centre.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericError
from .geometry import TWO_PI, XTOL, Domain, chord_exit_angle, tangency_from_exterior
from .twist import TwistModel

RTOL = 4 * np.finfo(float).eps


class BirkhoffModel(TwistModel):
    name = "birkhoff"
    has_generating_function = True

    def __init__(self, domain: Domain):
        self.domain = domain

    def lower(self, q):
        return -1.0

    def upper(self, q):
        return 1.0

    def from_chart(self, q, u):
        return -math.cos(math.pi * u)

    def to_chart(self, q, p):
        return math.acos(-p) / math.pi

    def _advance(self, theta, phi):
        theta1 = chord_exit_angle(self.domain, theta, phi)
        return theta1, theta1 - theta - phi

    def step(self, q, p):
        if not -1.0 < p < 1.0:
            raise DomainError(f"sigma must lie in (-1, 1), got {p}")
        theta1, phi1 = self._advance(self.domain.theta_of_arclength(q), math.acos(-p))
        return float(self.domain.arclength(theta1)), -math.cos(phi1)

    def iterate_n(self, q, p, n):
        if n == 0:
            return q, p
        if not -1.0 < p < 1.0:
            raise DomainError(f"sigma must lie in (-1, 1), got {p}")
        theta, phi = self.domain.theta_of_arclength(q), math.acos(-p)
        for _ in range(n):
            theta, phi = self._advance(theta, phi)
        return float(self.domain.arclength(theta)), -math.cos(phi)

    def S(self, q, Q):
        d = self.domain
        x0, y0 = d.xy(d.theta_of_arclength(q))
        x1, y1 = d.xy(d.theta_of_arclength(Q))
        return -math.hypot(x1 - x0, y1 - y0) / d.perimeter

    def dS(self, q, Q):
        d = self.domain
        t0, t1 = d.theta_of_arclength(q), d.theta_of_arclength(Q)
        x0, y0 = d.xy(t0)
        x1, y1 = d.xy(t1)
        r = math.hypot(x1 - x0, y1 - y0)
        ux, uy = (x1 - x0) / r, (y1 - y0) / r
        return ux * math.cos(t0) + uy * math.sin(t0), -(ux * math.cos(t1) + uy * math.sin(t1))

    def in_generating_domain(self, q, Q):
        return 0.0 < Q - q < 1.0


class OuterModel(TwistModel):
    name = "outer"

    def __init__(self, domain: Domain):
        self.domain = domain
        self._scale = domain.perimeter / TWO_PI

    def lower(self, q):
        return 0.0

    def upper(self, q):
        return math.inf

    # chart: distance to the tangency point d = R u / (1 - u), r_env = d^2 / 2
    def from_chart(self, q, u):
        d = self._scale * u / (1.0 - u)
        return 0.5 * d * d

    def to_chart(self, q, p):
        d = math.sqrt(2.0 * p)
        return d / (self._scale + d)

    def contains(self, q, p):
        return 0.0 < p < math.inf

    def _next_tangency(self, theta, d):
        dom = self.domain
        x, y = dom.xy(theta)
        zx, zy = x + d * math.cos(theta), y + d * math.sin(theta)

        def beyond(psi):
            ax, ay = dom.xy(psi)
            return (zx - ax) * math.sin(psi) - (zy - ay) * math.cos(psi)

        off = min(0.5 * math.pi, d / dom.rho_max)
        while beyond(theta + off) <= 0.0:
            off *= 0.5
            if off < 1e-14:
                raise NumericError(f"outer step bracket failed at theta={theta}, d={d}")
        theta1 = brentq(beyond, theta + off, theta + math.pi, xtol=XTOL, rtol=RTOL, maxiter=200)
        ax, ay = dom.xy(theta1)
        return theta1, math.hypot(ax - zx, ay - zy)

    def step(self, q, p):
        if not p > 0:
            raise DomainError(f"r_env must be positive, got {p}")
        theta1, d1 = self._next_tangency(TWO_PI * q, math.sqrt(2.0 * p))
        return theta1 / TWO_PI, 0.5 * d1 * d1

    def iterate_n(self, q, p, n):
        if n == 0:
            return q, p
        if not p > 0:
            raise DomainError(f"r_env must be positive, got {p}")
        theta, d = TWO_PI * q, math.sqrt(2.0 * p)
        for _ in range(n):
            theta, d = self._next_tangency(theta, d)
        return theta / TWO_PI, 0.5 * d * d


class SymplecticModel(TwistModel):
    name = "symplectic"
    has_generating_function = True

    def __init__(self, domain: Domain):
        self.domain = domain

    def gamma(self, t):
        return self.domain.centered_xy(TWO_PI * t)

    def dgamma(self, t):
        th = TWO_PI * t
        r = TWO_PI * float(self.domain.rho(th))
        return r * math.cos(th), r * math.sin(th)

    def omega_dg_g(self, t1, t2):
        ax, ay = self.dgamma(t1)
        bx, by = self.gamma(t2)
        return ax * by - ay * bx

    def lower(self, q):
        return self.omega_dg_g(q, q)

    def upper(self, q):
        return self.omega_dg_g(q, q + 0.5)

    def _t2_of(self, t1, s1):
        ax, ay = self.dgamma(t1)

        def f(t):
            bx, by = self.gamma(t)
            return ax * by - ay * bx - s1

        return brentq(f, t1, t1 + 0.5, xtol=XTOL, rtol=RTOL, maxiter=200)

    def _t3_of(self, t1, t2):
        ax, ay = self.dgamma(t2)
        cx, cy = self.gamma(t1)

        def g(t):
            bx, by = self.gamma(t)
            return ax * (by - cy) - ay * (bx - cx)

        return brentq(g, t2, t2 + 0.5, xtol=XTOL, rtol=RTOL, maxiter=200)

    def _check(self, q, p):
        if not self.lower(q) < p < self.upper(q):
            raise DomainError(f"s = {p} outside ({self.lower(q)}, {self.upper(q)}) at t = {q}")

    def step(self, q, p):
        return self.iterate_n(q, p, 1)

    def iterate_n(self, q, p, n):
        if n == 0:
            return q, p
        self._check(q, p)
        t1, t2 = q, self._t2_of(q, p)
        for _ in range(n):
            t1, t2 = t2, self._t3_of(t1, t2)
        return t1, self.omega_dg_g(t1, t2)

    def S(self, q, Q):
        ax, ay = self.gamma(q)
        bx, by = self.gamma(Q)
        return -(ax * by - ay * bx)

    def dS(self, q, Q):
        ax, ay = self.gamma(q)
        bx, by = self.gamma(Q)
        dax, day = self.dgamma(q)
        dbx, dby = self.dgamma(Q)
        return -(dax * by - day * bx), -(ax * dby - ay * dbx)

    def in_generating_domain(self, q, Q):
        return 0.0 < Q - q < 0.5


MODELS = {"birkhoff": BirkhoffModel, "outer": OuterModel, "symplectic": SymplecticModel}


def make_model(kind: str, domain: Domain) -> TwistModel:
    try:
        return MODELS[kind](domain)
    except KeyError:
        raise DomainError(f"unknown billiard model {kind!r}") from None


# --------------------------------------------------------------------------
# operations in the vocabulary of each billiard

def birkhoff_step(model: BirkhoffModel, s, sigma):
    if not -1.0 < sigma < 1.0:
        raise DomainError(f"sigma must lie in (-1, 1), got {sigma}")
    return model.step(s, sigma)


def birkhoff_generating(model: BirkhoffModel, s, s1):
    if s1 == s:
        raise DomainError("coincident points have no chord")
    return model.S(s, s1)


def outer_step_cartesian(model: OuterModel, z):
    """Image of z (relative to the domain centre): z' = 2 q - z."""
    theta = tangency_from_exterior(model.domain, z)
    qx, qy = model.domain.centered_xy(theta)
    return np.array([2 * qx - z[0], 2 * qy - z[1]])


def envelope_coords(model: OuterModel, z):
    """(theta / 2pi, r_env) of an exterior point z (relative to the centre)."""
    theta = tangency_from_exterior(model.domain, z)
    qx, qy = model.domain.centered_xy(theta)
    return theta / TWO_PI, 0.5 * ((qx - z[0]) ** 2 + (qy - z[1]) ** 2)


def envelope_to_cartesian(model: OuterModel, q, r_env):
    theta = TWO_PI * q
    qx, qy = model.domain.centered_xy(theta)
    d = math.sqrt(2.0 * r_env)
    return np.array([qx - d * math.cos(theta), qy - d * math.sin(theta)])


def outer_step(model: OuterModel, q, r_env):
    return model.step(q, r_env)


def symplectic_step(model: SymplecticModel, t1, t2):
    if not 0.0 < t2 - t1 < 0.5:
        raise DomainError(f"({t1}, {t2}) is not an admissible pair (need t1 < t2 < t1*)")
    return t2, model._t3_of(t1, t2)


def symplectic_twist_coords(model: SymplecticModel, t1, t2):
    if not 0.0 < t2 - t1 < 0.5:
        raise DomainError(f"({t1}, {t2}) is not an admissible pair (need t1 < t2 < t1*)")
    return t1, model.omega_dg_g(t1, t2)


def s_minus(model: SymplecticModel, t):
    return model.lower(t)


def s_plus(model: SymplecticModel, t):
    return model.upper(t)


def conic_fit_residual(points) -> float:
    """Max algebraic residual of the least-squares conic through points.

    Coordinates are scaled to unit RMS before fitting; the coefficient vector
    has unit norm.
    """
    pts = np.asarray(points, dtype=float)
    scale = math.sqrt(np.mean(np.sum(pts ** 2, axis=1)))
    x, y = pts[:, 0] / scale, pts[:, 1] / scale
    A = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, _, vt = np.linalg.svd(A, full_matrices=False)
    return float(np.max(np.abs(A @ vt[-1])))
