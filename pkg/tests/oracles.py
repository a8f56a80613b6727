"""Reference computations that share no code with the package.

Ellipses here are x^2/a^2 + y^2/b^2 = 1 centred at the origin, parametrized
by the eccentric angle t with the minor-axis bottom vertex at t = -pi/2; the
package places its arclength origin at the same vertex and runs
counterclockwise, so arclength fractions agree.
"""
from __future__ import annotations

import itertools
import math

import mpmath as mp
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq


# --------------------------------------------------------------------------
# circle closed forms

def circle_birkhoff_eta(m, n):
    return -math.cos(math.pi * m / n)


def circle_outer_eta(m, n, radius):
    """Half squared tangent length of the ring with rotation m/n."""
    d = radius * math.tan(math.pi * m / n)
    return 0.5 * d * d


def circle_symplectic_eta(m, n, radius):
    return -2 * math.pi * radius ** 2 * math.cos(2 * math.pi * m / n)


# --------------------------------------------------------------------------
# Cartesian ellipse

class Ellipse:
    def __init__(self, a, b):
        self.a, self.b = a, b
        self.perimeter = quad(self.speed, 0, 2 * math.pi, epsabs=0, epsrel=1e-13, limit=200)[0]

    def speed(self, t):
        return math.hypot(self.a * math.sin(t), self.b * math.cos(t))

    def point(self, t):
        return np.array([self.a * math.cos(t), self.b * math.sin(t)])

    def tangent(self, t):
        v = np.array([-self.a * math.sin(t), self.b * math.cos(t)])
        return v / np.linalg.norm(v)

    def fraction(self, t):
        """Arclength fraction from the bottom vertex, counterclockwise."""
        t0 = -math.pi / 2
        k, r = divmod(t - t0, 2 * math.pi)
        s = quad(self.speed, t0, t0 + r, epsabs=0, epsrel=1e-13, limit=200)[0]
        return k + s / self.perimeter

    def angle_of_fraction(self, s):
        k, r = divmod(s, 1.0)
        t0 = -math.pi / 2
        t = brentq(lambda t: self.fraction(t) - r, t0 - 1e-9, t0 + 2 * math.pi + 1e-9, xtol=1e-15)
        return t + 2 * math.pi * k

    def hit(self, x, u):
        """Second intersection of the ray x + s u (x on the ellipse, s > 0)."""
        A = (u[0] / self.a) ** 2 + (u[1] / self.b) ** 2
        B = 2 * (x[0] * u[0] / self.a ** 2 + x[1] * u[1] / self.b ** 2)
        s = -B / A
        y = x + s * u
        return y, math.atan2(y[1] / self.b, y[0] / self.a)

    def reflect(self, y, t, u):
        n = np.array([y[0] / self.a ** 2, y[1] / self.b ** 2])
        n /= np.linalg.norm(n)
        return u - 2 * np.dot(u, n) * n


def _caustic_direction(ell: Ellipse, t, lam):
    """Forward direction from the boundary point at t tangent to the confocal
    caustic x^2/(a^2 - lam) + y^2/(b^2 - lam) = 1."""
    A, B = ell.a ** 2 - lam, ell.b ** 2 - lam
    x = ell.point(t)
    T = ell.tangent(t)
    tau = math.atan2(T[1], T[0])

    def disc(alpha):
        u = (math.cos(alpha), math.sin(alpha))
        qa = u[0] ** 2 / A + u[1] ** 2 / B
        qb = x[0] * u[0] / A + x[1] * u[1] / B
        qc = x[0] ** 2 / A + x[1] ** 2 / B - 1
        return qb * qb - qa * qc

    grid = np.linspace(tau + 1e-9, tau + math.pi - 1e-9, 400)
    vals = [disc(g) for g in grid]
    for g0, g1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if v0 * v1 < 0:
            alpha = brentq(disc, g0, g1, xtol=1e-15)
            return np.array([math.cos(alpha), math.sin(alpha)])
    raise RuntimeError("no tangent from boundary point to the caustic")


def _winding(ell, t, lam, bounces):
    x, u = ell.point(t), _caustic_direction(ell, t, lam)
    total = 0.0
    cur = t
    for _ in range(bounces):
        y, ty = ell.hit(x, u)
        total += (ty - cur) % (2 * math.pi)
        u = ell.reflect(y, ty, u)
        x, cur = y, ty
    return total, x


def poncelet_caustic(ell: Ellipse, m, n):
    """Confocal parameter whose caustic carries rotation m/n (0 < m/n < 1/2)."""
    f = lambda lam: _winding(ell, -math.pi / 2, lam, n)[0] - 2 * math.pi * m
    return brentq(f, 1e-12, ell.b ** 2 * (1 - 1e-12), xtol=1e-16, rtol=1e-15)


def poncelet_sigma(ell: Ellipse, lam, fraction):
    """sigma = -<u, T> of the caustic-tangent chord leaving the given point."""
    t = ell.angle_of_fraction(fraction)
    u = _caustic_direction(ell, t, lam)
    return -float(np.dot(u, ell.tangent(t)))


def poncelet_closure(ell: Ellipse, lam, n, fraction):
    """Distance between the start and the n-th bounce point."""
    t = ell.angle_of_fraction(fraction)
    _, x = _winding(ell, t, lam, n)
    return float(np.linalg.norm(x - ell.point(t)))


# --------------------------------------------------------------------------
# rotation 1/2: the closed 2-chain through the farthest point

def two_chain_defect(a, b, fraction, dps=40):
    """delta2 of the closed 2-chain from the point at the given arclength
    fraction, computed in mpmath.

    The chain bounces back along a chord normal at the far end; the longest
    such chord (the farthest boundary point) is the minimal-action branch.
    Closing the chain requires only the normal condition at the far point, so
    delta2 = 2 <u, T(x)>, u the unit chord direction.
    """
    with mp.workdps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        speed = lambda t: mp.sqrt((a * mp.sin(t)) ** 2 + (b * mp.cos(t)) ** 2)
        t0 = -mp.pi / 2
        L = mp.quad(speed, [t0, t0 + mp.pi, t0 + 2 * mp.pi])
        target = mp.mpf(fraction) % 1 * L
        frac = lambda t: mp.quad(speed, [t0, t]) - target
        t = mp.findroot(frac, t0 + 2 * mp.pi * (mp.mpf(fraction) % 1))
        x = mp.matrix([a * mp.cos(t), b * mp.sin(t)])
        d2 = lambda v: (a * mp.cos(v) - x[0]) ** 2 + (b * mp.sin(v) - x[1]) ** 2
        grid = [t + mp.pi * (1 + mp.mpf(k) / 200 - mp.mpf(1) / 2) for k in range(201)]
        v0 = max(grid, key=d2)
        v = mp.findroot(lambda v: mp.diff(d2, v), v0)
        y = mp.matrix([a * mp.cos(v), b * mp.sin(v)])
        u = (y - x) / mp.norm(y - x)
        T = mp.matrix([-a * mp.sin(t), b * mp.cos(t)])
        T = T / mp.norm(T)
        return float(2 * (u[0] * T[0] + u[1] * T[1]))


# --------------------------------------------------------------------------
# outer billiard on an ellipse via the affine image of the circle

def outer_ellipse_step(a, b, z):
    """Outer-billiard image of z about x^2/a^2 + y^2/b^2 = 1 (centred frame).

    The affine map (x/a, y/b) sends the ellipse to the unit circle, where the
    outer billiard rotates a point at distance r by 2 arccos(1/r).
    """
    w = np.array([z[0] / a, z[1] / b])
    r = np.linalg.norm(w)
    ang = 2 * math.acos(1 / r)
    c, s = math.cos(ang), math.sin(ang)
    w1 = np.array([c * w[0] - s * w[1], s * w[0] + c * w[1]])
    return np.array([a * w1[0], b * w1[1]])


# --------------------------------------------------------------------------
# brute force over interior points

def brute_force_min_action(S, q0, q_end, steps, M):
    """Smallest fixed-endpoint action over a uniform interior grid."""
    nodes = [q0 + (q_end - q0) * (i + 1) / (M + 1) for i in range(M)]
    best = math.inf
    for combo in itertools.combinations(nodes, steps - 1):
        path = (q0, *combo, q_end)
        best = min(best, sum(S(x, y) for x, y in zip(path[:-1], path[1:])))
    return best
