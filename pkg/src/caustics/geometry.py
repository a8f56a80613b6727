"""Strictly convex planar domains parametrized by the tangent angle.

A domain is described by its radius of curvature rho(theta), where theta is
the angle between the oriented (counterclockwise) tangent and the x-axis.
The boundary curve is

    gamma(theta) = integral_0^theta rho(t) (cos t, sin t) dt,

so gamma(0) = (0, 0) with tangent (1, 0). The curve closes iff the first
harmonic of rho vanishes. Two concrete kinds exist: a truncated Fourier
series for rho, and closed-form ellipses.

Arclength is always reported as a fraction of the perimeter, so one turn
around the boundary advances s by exactly 1 regardless of size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import ellipe, ellipeinc

from .errors import DomainError, NotConvexError, NumericError

TWO_PI = 2.0 * math.pi
CLOSURE_TOL = 1e-12
DEFAULT_CUTOFF = 64
DEFAULT_PANELS = 256
XTOL = 1e-15


@dataclass(frozen=True)
class DomainSpec:
    """Serializable description of a domain.

    ``coefficients`` holds (k, rho_k) pairs of the complex Fourier series
    rho(theta) = sum_k rho_k exp(i k theta); it must be conjugate-symmetric.
    ``r`` is the analyticity-strip width and is carried as metadata only.
    """

    kind: str
    coefficients: tuple = ()
    a: float = 1.0
    b: float = 1.0
    r: float | None = None
    normalize: bool = True
    cutoff: int = DEFAULT_CUTOFF

    def __post_init__(self):
        if self.kind not in ("fourier-rho", "ellipse"):
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == "ellipse":
            if not (self.a >= self.b > 0):
                raise DomainError(f"ellipse needs a >= b > 0, got a={self.a}, b={self.b}")
        else:
            coeffs = {int(k): complex(c) for k, c in self.coefficients}
            if 0 not in coeffs or coeffs[0].real <= 0:
                raise NotConvexError("rho needs a positive mean (k = 0 coefficient)")
            for k, c in coeffs.items():
                if abs(k) > self.cutoff:
                    raise DomainError(f"harmonic {k} exceeds cutoff {self.cutoff}")
                partner = coeffs.get(-k, 0.0)
                if abs(partner - c.conjugate()) > 1e-14 * max(1.0, abs(c)):
                    raise DomainError(f"coefficients not conjugate-symmetric at k={k}")
            if abs(coeffs.get(1, 0.0)) >= CLOSURE_TOL * coeffs[0].real:
                raise DomainError("first harmonic of rho must vanish (curve would not close)")

    def build(self) -> "Domain":
        return _build(self)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "normalize": self.normalize}
        if self.kind == "ellipse":
            d.update(a=self.a, b=self.b)
        else:
            d["coefficients"] = [[int(k), complex(c).real, complex(c).imag]
                                 for k, c in sorted(self.coefficients, key=lambda kc: kc[0])]
            d["cutoff"] = self.cutoff
        if self.r is not None:
            d["r"] = self.r
        return d


@lru_cache(maxsize=128)
def _build(spec: DomainSpec) -> "Domain":
    if spec.kind == "ellipse":
        return EllipseDomain(spec.a, spec.b, normalize=spec.normalize)
    return FourierDomain(dict(spec.coefficients), normalize=spec.normalize)


def harmonics(mean, cos=None, sin=None, cutoff=DEFAULT_CUTOFF) -> DomainSpec:
    """Spec for rho = mean + sum_k cos[k] cos(k t) + sin[k] sin(k t)."""
    coeffs = {0: complex(mean)}
    for k, v in (cos or {}).items():
        coeffs[k] = coeffs.get(k, 0) + v / 2
        coeffs[-k] = coeffs.get(-k, 0) + v / 2
    for k, v in (sin or {}).items():
        coeffs[k] = coeffs.get(k, 0) - 0.5j * v
        coeffs[-k] = coeffs.get(-k, 0) + 0.5j * v
    return DomainSpec("fourier-rho", tuple(sorted(coeffs.items())), cutoff=cutoff)


def circle(perimeter=1.0) -> "Domain":
    spec = DomainSpec("fourier-rho", ((0, complex(perimeter / TWO_PI)),), normalize=False)
    return spec.build()


def ellipse(a, b, normalize=True) -> "Domain":
    return DomainSpec("ellipse", a=a, b=b, normalize=normalize).build()


def ellipse_spec(eccentricity, normalize=True) -> DomainSpec:
    if not 0 <= eccentricity < 1:
        raise DomainError(f"eccentricity must lie in [0, 1), got {eccentricity}")
    return DomainSpec("ellipse", a=1.0, b=math.sqrt(1.0 - eccentricity ** 2), normalize=normalize)


def ellipse_rho_coefficients(a, b, cutoff=DEFAULT_CUTOFF):
    """Fourier coefficients of the ellipse radius of curvature, by FFT."""
    m = 8 * cutoff
    theta = TWO_PI * np.arange(m) / m
    c = np.fft.fft(EllipseDomain(a, b, normalize=False).rho(theta)) / m
    out = {}
    for k in range(-cutoff, cutoff + 1):
        ck = c[k % m]
        if k % 2:
            continue  # odd harmonics vanish by central symmetry
        out[k] = complex(ck.real, 0.0)
    return out


class Domain:
    """Common interface; subclasses fill in the closed forms."""

    perimeter: float
    center: np.ndarray

    def rho(self, theta):
        raise NotImplementedError

    def xy(self, theta: float) -> tuple[float, float]:
        raise NotImplementedError

    def arclength(self, theta):
        raise NotImplementedError

    def _theta_in_period(self, r: float) -> float:
        raise NotImplementedError

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim == 0:
            return np.array(self.xy(float(theta)))
        return np.array([self.xy(float(t)) for t in theta]).T

    def centered_xy(self, theta: float) -> tuple[float, float]:
        x, y = self.xy(theta)
        return x - self.center[0], y - self.center[1]

    def theta_of_arclength(self, s):
        """Inverse of :meth:`arclength` on the lift."""
        if np.ndim(s):
            return np.array([self.theta_of_arclength(float(v)) for v in np.ravel(s)]).reshape(np.shape(s))
        k = math.floor(s)
        return TWO_PI * k + self._theta_in_period(s - k)

    @property
    def rho_max(self) -> float:
        return self._rho_max

    @property
    def rho_min(self) -> float:
        return self._rho_min

    def _check_convex(self, n=4096):
        vals = self.rho(TWO_PI * np.arange(n) / n)
        self._rho_min = float(vals.min())
        self._rho_max = float(vals.max())
        if self._rho_min <= 0:
            raise NotConvexError(f"radius of curvature reaches {self._rho_min:.3e} <= 0")


class FourierDomain(Domain):
    def __init__(self, coefficients: dict, normalize=True):
        ks = np.array(sorted(coefficients), dtype=int)
        c = np.array([complex(coefficients[k]) for k in ks])
        c0 = c[ks == 0][0].real
        if normalize:
            c = c / (TWO_PI * c0)
            c0 = 1.0 / TWO_PI
        keep = np.abs(c) > 1e-18 * c0
        self._ks, self._c = ks[keep], c[keep]
        self.perimeter = TWO_PI * c0
        self._c0 = c0
        self._check_convex()
        # gamma(theta) = sum_k w_k (e^{i(k+1) theta} - 1), k != -1
        mask = self._ks != -1
        self._kp1 = (self._ks[mask] + 1).astype(float)
        self._w = self._c[mask] / (1j * self._kp1)
        self._w_sum = complex(self._w.sum())
        nz = self._ks != 0
        self._kn = self._ks[nz].astype(float)
        self._v = self._c[nz] / (1j * self._kn)
        self._v_sum = complex(self._v.sum())
        self.center = self._area_centroid()

    @property
    def coefficients(self) -> dict:
        return {int(k): complex(c) for k, c in zip(self._ks, self._c)}

    def rho(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = np.real(np.exp(1j * np.multiply.outer(theta, self._ks)) @ self._c)
        return vals

    def xy(self, theta):
        z = np.dot(self._w, np.exp(1j * self._kp1 * theta)) - self._w_sum
        return z.real, z.imag

    def _raw_arclength(self, theta):
        if self._kn.size == 0:
            return self._c0 * theta
        return self._c0 * theta + (np.dot(self._v, np.exp(1j * self._kn * theta)) - self._v_sum).real

    def arclength(self, theta):
        if np.ndim(theta):
            return np.array([self.arclength(float(t)) for t in np.ravel(theta)]).reshape(np.shape(theta))
        return self._raw_arclength(theta) / self.perimeter

    def _theta_in_period(self, r):
        target = r * self.perimeter
        return _invert_monotone(self._raw_arclength,
                                lambda t: float(self.rho(t)), target,
                                TWO_PI * r, 0.0, TWO_PI)

    def _area_centroid(self, n=2048):
        t = TWO_PI * np.arange(n) / n
        z = np.exp(1j * np.multiply.outer(t, self._kp1)) @ self._w - self._w_sum
        x, y = z.real, z.imag
        r = self.rho(t)
        dx, dy = r * np.cos(t), r * np.sin(t)
        h = TWO_PI / n
        area = 0.5 * np.sum(x * dy - y * dx) * h
        cx = np.sum(x * x * dy) * h / (2 * area)
        cy = -np.sum(y * y * dx) * h / (2 * area)
        return np.array([cx, cy])


class EllipseDomain(Domain):
    """Ellipse with semi-axes a >= b, major axis horizontal.

    With the tangent-angle convention the origin sits at the bottom vertex and
    the centre at (0, b).
    """

    def __init__(self, a, b, normalize=True):
        if not (a >= b > 0):
            raise DomainError(f"ellipse needs a >= b > 0, got a={a}, b={b}")
        m = 1.0 - (b / a) ** 2
        perimeter = 4.0 * a * float(ellipe(m))
        if normalize:
            a, b = a / perimeter, b / perimeter
            perimeter = 1.0
        self.a, self.b, self._m = float(a), float(b), m
        self.perimeter = perimeter
        self.center = np.array([0.0, self.b])
        self._check_convex()

    def rho(self, theta):
        s, c = np.sin(theta), np.cos(theta)
        h = np.sqrt(self.a ** 2 * s * s + self.b ** 2 * c * c)
        return (self.a * self.b) ** 2 / h ** 3

    def xy(self, theta):
        s, c = math.sin(theta), math.cos(theta)
        a, b = self.a, self.b
        h = math.sqrt(a * a * s * s + b * b * c * c)
        return a * a * s / h, b - b * b * c / h

    def eccentric_angle(self, theta):
        """Angle v with centred position (a sin v, -b cos v)."""
        s, c = np.sin(theta), np.cos(theta)
        return theta + np.arctan2((self.a - self.b) * s * c, self.b * c * c + self.a * s * s)

    def theta_of_eccentric(self, v):
        s, c = np.sin(v), np.cos(v)
        return v + np.arctan2((self.b - self.a) * s * c, self.a * c * c + self.b * s * s)

    def _speed(self, v):
        return math.sqrt((self.a * math.cos(v)) ** 2 + (self.b * math.sin(v)) ** 2)

    def arclength(self, theta):
        return self.a * ellipeinc(self.eccentric_angle(theta), self._m) / self.perimeter

    def _theta_in_period(self, r):
        target = r * self.perimeter
        v = _invert_monotone(lambda v: self.a * float(ellipeinc(v, self._m)), self._speed,
                             target, TWO_PI * r, 0.0, TWO_PI)
        return float(self.theta_of_eccentric(v))


def _invert_monotone(f, fprime, target, x0, lo, hi, tol=1e-15, maxiter=100):
    """Safeguarded Newton for an increasing f on [lo, hi]."""
    x = min(max(x0, lo), hi)
    for _ in range(maxiter):
        r = f(x) - target
        if r > 0:
            hi = x
        else:
            lo = x
        step = r / fprime(x)
        xn = x - step
        if not lo <= xn <= hi:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= tol * max(1.0, abs(x)):
            return xn
        x = xn
    raise NumericError(f"arclength inversion did not converge (target {target})")


# --------------------------------------------------------------------------
# operations on domains

@dataclass(frozen=True)
class BoundaryFrame:
    t: float
    position: np.ndarray = field(repr=False)
    tangent: np.ndarray = field(repr=False)
    curvature: float = 0.0


def rho(domain: Domain, theta):
    val = domain.rho(theta)
    if np.any(np.asarray(val) <= 0):
        raise NotConvexError(f"rho({theta}) = {val} is not positive")
    return val


def boundary_point(domain: Domain, theta: float) -> BoundaryFrame:
    return BoundaryFrame(theta, domain.point(theta),
                         np.array([math.cos(theta), math.sin(theta)]),
                         1.0 / float(domain.rho(theta)))


def boundary_point_quadrature(domain: Domain, theta: float, panels=DEFAULT_PANELS, order=8):
    """gamma(theta) by composite Gauss-Legendre quadrature of rho (cos, sin).

    Independent of the closed forms used by :meth:`Domain.xy`.
    """
    if theta == 0:
        return np.zeros(2)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, theta, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    r = domain.rho(t)
    return np.array([np.sum(w * r * np.cos(t)), np.sum(w * r * np.sin(t))])


def arclength(domain: Domain, theta):
    return domain.arclength(theta)


def param_of_arclength(domain: Domain, s):
    return domain.theta_of_arclength(s)


def chord_exit_angle(domain: Domain, theta: float, phi: float) -> float:
    """Tangent angle where the chord leaving gamma(theta) at angle phi exits.

    The chord direction has angle theta + phi. By convexity the exit tangent
    angle lies in (theta + phi, theta + phi + pi), which brackets the root of
    the signed distance of gamma(u) to the chord line.
    """
    if not 0.0 < phi < math.pi:
        raise DomainError(f"chord angle must lie in (0, pi), got {phi}")
    x0, y0 = domain.xy(theta)
    dx, dy = math.cos(theta + phi), math.sin(theta + phi)

    def side(u):
        x, y = domain.xy(u)
        return dx * (y - y0) - dy * (x - x0)

    lo, hi = theta + phi, theta + phi + math.pi
    flo, fhi = side(lo), side(hi)
    if flo >= 0 or fhi <= 0:
        # grazing chords: the root can sit within rounding of an endpoint
        if abs(flo) < 1e-15:
            return lo
        if abs(fhi) < 1e-15:
            return hi
        raise NumericError(f"chord bracket failed at theta={theta}, phi={phi}")
    return brentq(side, lo, hi, xtol=XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)


def chord_second_hit(domain: Domain, s: float, phi: float) -> float:
    theta = domain.theta_of_arclength(s)
    return float(domain.arclength(chord_exit_angle(domain, theta, phi)))


def tangency_from_exterior(domain: Domain, z) -> float:
    """Tangent angle of the tangency point seen from exterior point z.

    ``z`` is given relative to ``domain.center``. Among the two tangent lines
    through z, the one whose tangency point q makes z->q point along the
    counterclockwise tangent is selected.
    """
    zx = float(z[0]) + domain.center[0]
    zy = float(z[1]) + domain.center[1]

    def beyond(psi):
        # signed distance of z past the tangent line at psi (outward normal)
        x, y = domain.xy(psi)
        return (zx - x) * math.sin(psi) - (zy - y) * math.cos(psi)

    n = 256
    grid = TWO_PI * np.arange(n) / n
    vals = np.array([beyond(p) for p in grid])
    j = int(np.argmax(vals))
    psi0, best = float(grid[j]), float(vals[j])
    scale = domain.perimeter
    if best <= 1e-6 * scale:
        res = minimize_scalar(lambda p: -beyond(p), bracket=(psi0 - TWO_PI / n, psi0, psi0 + TWO_PI / n),
                              tol=1e-12)
        psi0, best = float(res.x), -float(res.fun)
    if best <= 1e-13 * scale:
        raise DomainError("point is not strictly exterior to the domain")
    step = TWO_PI / n
    lo = psi0
    for _ in range(n + 1):
        hi = lo + step
        if beyond(hi) <= 0:
            break
        lo = hi
    else:
        raise NumericError("no tangent line found")
    theta = brentq(beyond, lo, hi, xtol=XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    return theta % TWO_PI


def antipodal_param(domain: Domain, t: float, param="arclength") -> float:
    """Parameter of the point with tangent parallel to the tangent at t."""
    if param == "angle":
        return t + 0.5
    if param == "theta":
        return t + math.pi
    if param != "arclength":
        raise DomainError(f"unknown parametrization {param!r}")
    return float(domain.arclength(domain.theta_of_arclength(t) + math.pi))


def closure_defect(domain: Domain) -> float:
    x, y = domain.xy(TWO_PI)
    return math.hypot(x, y)
