import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from caustics.errors import DomainError, NotConvexError
from caustics.geometry import (TWO_PI, DomainSpec, antipodal_param, arclength, boundary_point,
                               boundary_point_quadrature, chord_second_hit, circle, closure_defect,
                               ellipse, ellipse_rho_coefficients, harmonics, param_of_arclength, rho,
                               tangency_from_exterior)


# a small family of smooth convex domains: mean 1/(2 pi) plus bounded harmonics
small_domains = st.builds(
    lambda c2, c3, s4: harmonics(1.0, cos={2: c2, 3: c3}, sin={4: s4}).build(),
    st.floats(-0.3, 0.3), st.floats(-0.2, 0.2), st.floats(-0.2, 0.2))


class TestRho:
    def test_circle_constant(self, circle1):
        assert rho(circle1, 1.234) == pytest.approx(1 / TWO_PI, abs=1e-15)

    def test_unnormalized_unit_circle(self):
        d = ellipse(1.0, 1.0, normalize=False)
        assert rho(d, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_ellipse_matches_parametric_curvature(self):
        a, b = 1.0, 0.5
        d = ellipse(a, b, normalize=False)
        # finite-difference curvature of (a cos t, b sin t) at the minor vertex t = -pi/2
        t, h = -math.pi / 2, 1e-4
        pt = lambda t: np.array([a * math.cos(t), b * math.sin(t)])
        d1 = (pt(t + h) - pt(t - h)) / (2 * h)
        d2 = (pt(t + h) - 2 * pt(t) + pt(t - h)) / h ** 2
        kappa = abs(d1[0] * d2[1] - d1[1] * d2[0]) / np.linalg.norm(d1) ** 3
        assert rho(d, 0.0) == pytest.approx(1 / kappa, rel=1e-7)
        assert rho(d, 0.0) == pytest.approx(a * a / b, rel=1e-14)

    def test_nonpositive_rejected(self):
        with pytest.raises(NotConvexError):
            harmonics(1.0, cos={2: 1.5}).build()


class TestDomainSpec:
    def test_first_harmonic_rejected(self):
        with pytest.raises(DomainError):
            harmonics(1.0, cos={1: 0.1})

    def test_not_conjugate_symmetric(self):
        with pytest.raises(DomainError):
            DomainSpec("fourier-rho", ((0, 1.0), (2, 0.1), (-2, 0.2)))

    def test_ellipse_axes_order(self):
        with pytest.raises(DomainError):
            DomainSpec("ellipse", a=0.5, b=1.0)

    def test_cutoff(self):
        with pytest.raises(DomainError):
            harmonics(1.0, cos={80: 0.01})

    def test_ellipse_fourier_agrees_with_closed_form(self):
        coeffs = ellipse_rho_coefficients(1.0, math.sqrt(0.75))
        f = DomainSpec("fourier-rho", tuple(sorted(coeffs.items()))).build()
        e = ellipse(1.0, math.sqrt(0.75))
        for th in np.linspace(0, TWO_PI, 17):
            assert np.allclose(f.point(th), e.point(th), atol=1e-13)


class TestBoundaryPoint:
    def test_origin_frame(self, ellipse_half):
        fr = boundary_point(ellipse_half, 0.0)
        assert np.allclose(fr.position, 0.0, atol=1e-15)
        assert np.allclose(fr.tangent, [1.0, 0.0])

    def test_circle_half_turn(self, circle1):
        fr = boundary_point(circle1, math.pi)
        assert np.allclose(fr.position, [0.0, 1 / math.pi], atol=1e-15)
        assert np.allclose(fr.tangent, [-1.0, 0.0], atol=1e-15)

    def test_ellipse_quarter(self):
        # positions are relative to the bottom vertex: right vertex at (a, b), top at (0, 2b)
        d = ellipse(1.0, 0.5, normalize=False)
        assert np.allclose(d.point(math.pi / 2), [1.0, 0.5], atol=1e-14)
        assert np.allclose(d.point(math.pi), [0.0, 1.0], atol=1e-14)

    @pytest.mark.parametrize("th", [0.3, 1.7, 3.1, 5.9])
    def test_closed_form_matches_quadrature(self, ellipse_half, th):
        assert np.allclose(boundary_point_quadrature(ellipse_half, th), ellipse_half.point(th),
                           atol=1e-13)

    @given(small_domains, st.floats(0.0, TWO_PI))
    def test_fourier_closed_form_matches_quadrature(self, d, th):
        assert np.allclose(boundary_point_quadrature(d, th), d.point(th), atol=1e-12)

    @given(small_domains)
    def test_closure(self, d):
        assert closure_defect(d) < 1e-10

    def test_tangent_unit(self, ellipse_half):
        for th in np.linspace(0, TWO_PI, 11):
            assert np.linalg.norm(boundary_point(ellipse_half, th).tangent) == pytest.approx(1, abs=1e-12)


class TestArclength:
    def test_circle(self, circle1):
        assert arclength(circle1, math.pi) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("name", ["circle1", "ellipse_half", "ellipse_e05"])
    def test_full_period(self, name, request):
        assert arclength(request.getfixturevalue(name), TWO_PI) == pytest.approx(1.0, abs=1e-14)

    def test_ellipse_monotone(self, ellipse_half):
        s = arclength(ellipse_half, np.linspace(0, TWO_PI, 1000))
        assert np.all(np.diff(s) > 0)

    def test_ellipse_against_quadrature(self):
        # arclength is always the fraction of the perimeter
        d = ellipse(1.0, 0.5, normalize=False)
        rho_fn = lambda t: float(d.rho(t))
        for th in (0.4, 2.0, 4.4):
            exact = quad(rho_fn, 0, th, epsabs=0, epsrel=1e-13)[0] / d.perimeter
            assert arclength(d, th) == pytest.approx(exact, rel=1e-12)

    @given(small_domains, st.floats(-3.0, 3.0))
    def test_inverse_roundtrip(self, d, s):
        assert arclength(d, param_of_arclength(d, s)) == pytest.approx(s, abs=1e-10)

    @given(st.floats(-2.0, 2.0))
    def test_ellipse_inverse_roundtrip(self, s):
        d = ellipse(1.0, 0.3)
        assert arclength(d, param_of_arclength(d, s)) == pytest.approx(s, abs=1e-10)


class TestChordSecondHit:
    def test_diameter(self, circle1):
        assert chord_second_hit(circle1, 0.0, math.pi / 2) == pytest.approx(0.5, abs=1e-12)

    def test_star(self, circle1):
        assert chord_second_hit(circle1, 0.0, math.pi / 3) == pytest.approx(1 / 3, abs=1e-12)

    @given(st.floats(0.0, 1.0), st.floats(0.01, math.pi - 0.01))
    def test_circle_arc_rule(self, s, phi):
        d = circle()
        assert chord_second_hit(d, s, phi) - s == pytest.approx(phi / math.pi, abs=1e-10)

    def test_major_axis(self, ellipse_half):
        # right vertex (tangent pointing up) at s = 1/4, left vertex at s = 3/4
        assert chord_second_hit(ellipse_half, 0.25, math.pi / 2) == pytest.approx(0.75, abs=1e-12)

    @pytest.mark.parametrize("phi", [0.0, math.pi, -0.1])
    def test_angle_range(self, circle1, phi):
        with pytest.raises(DomainError):
            chord_second_hit(circle1, 0.0, phi)


class TestTangency:
    def test_circle_closed_form(self, unit_circle):
        # tangency at central angle +pi/3, i.e. tangent angle pi/3 + pi/2
        th = tangency_from_exterior(unit_circle, (2.0, 0.0))
        assert th == pytest.approx(math.pi / 3 + math.pi / 2, abs=1e-12)

    def test_far_limit(self, unit_circle):
        th = tangency_from_exterior(unit_circle, (1e6, 0.0))
        central = th - math.pi / 2
        assert central == pytest.approx(math.pi / 2, abs=1e-5)

    def test_boundary_point_rejected(self, unit_circle):
        with pytest.raises(DomainError):
            tangency_from_exterior(unit_circle, (1.0, 0.0))

    def test_interior_rejected(self, unit_circle):
        with pytest.raises(DomainError):
            tangency_from_exterior(unit_circle, (0.2, 0.1))


class TestAntipode:
    def test_circle(self, circle1):
        assert antipodal_param(circle1, 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_ellipse_vertices(self, ellipse_half):
        assert antipodal_param(ellipse_half, 0.25) == pytest.approx(0.75, abs=1e-13)

    @pytest.mark.parametrize("t", np.linspace(0, 1, 9))
    def test_central_symmetry(self, ellipse_half, t):
        ts = antipodal_param(ellipse_half, t)
        x = ellipse_half.centered_xy(param_of_arclength(ellipse_half, t))
        y = ellipse_half.centered_xy(param_of_arclength(ellipse_half, ts))
        assert np.allclose(x, -np.array(y), atol=1e-13)
