import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from caustics import circle, ellipse, make_model
from caustics.billiards import (birkhoff_generating, birkhoff_step, conic_fit_residual,
                                envelope_coords, envelope_to_cartesian, outer_step,
                                outer_step_cartesian, s_minus, s_plus, symplectic_step,
                                symplectic_twist_coords)
from caustics.errors import DomainError
from caustics.twist import check_exactness, check_twist_relation, iterate, phase_grid

from oracles import outer_ellipse_step


@pytest.fixture(scope="module")
def outer_unit():
    return make_model("outer", circle(2 * math.pi))


@pytest.fixture(scope="module")
def symp_unit():
    return make_model("symplectic", circle(2 * math.pi))


class TestBirkhoff:
    def test_diameter(self, birkhoff_circle):
        s1, sig1 = birkhoff_step(birkhoff_circle, 0.0, 0.0)
        assert (s1, sig1) == pytest.approx((0.5, 0.0), abs=1e-12)

    def test_star_preserves_sigma(self, birkhoff_circle):
        sig = -math.cos(math.pi / 3)
        assert birkhoff_step(birkhoff_circle, 0.0, sig) == pytest.approx((1 / 3, sig), abs=1e-12)

    def test_major_axis(self, birkhoff_ellipse):
        assert birkhoff_step(birkhoff_ellipse, 0.25, 0.0) == pytest.approx((0.75, 0.0), abs=1e-12)

    @pytest.mark.parametrize("sigma", [-1.0, 1.0])
    def test_boundary_sigma(self, birkhoff_circle, sigma):
        with pytest.raises(DomainError):
            birkhoff_step(birkhoff_circle, 0.0, sigma)

    def test_generating_circle(self, birkhoff_circle):
        assert birkhoff_generating(birkhoff_circle, 0.0, 0.5) == pytest.approx(-1 / math.pi)
        assert birkhoff_generating(birkhoff_circle, 0.0, 1 / 3) == pytest.approx(-math.sqrt(3) / (2 * math.pi))

    def test_generating_ellipse_vertices(self, ellipse_half):
        m = make_model("birkhoff", ellipse_half)
        # perimeter-normalized major axis: 2a / L
        L = ellipse(1.0, 0.5, normalize=False).perimeter
        assert birkhoff_generating(m, 0.25, 0.75) == pytest.approx(-2.0 / L, rel=1e-13)

    def test_generating_coincident(self, birkhoff_circle):
        with pytest.raises(DomainError):
            birkhoff_generating(birkhoff_circle, 0.2, 0.2)

    @given(st.floats(0.0, 1.0), st.floats(-0.95, 0.95))
    def test_mirror_reversal(self, s, sigma):
        # the ellipse is symmetric under s -> -s; the mirror image of an orbit run backwards
        m = make_model("birkhoff", ellipse(1.0, 0.6))
        s1, sig1 = m.step(s, sigma)
        back = m.step(-s1, sig1)
        assert back[0] == pytest.approx(-s, abs=1e-10)
        assert back[1] == pytest.approx(sigma, abs=1e-10)


class TestOuter:
    def test_midpoint_identity(self, outer_unit):
        z = np.array([1.3, 2.1])
        th = envelope_coords(outer_unit, z)[0]
        q = np.array(outer_unit.domain.centered_xy(2 * math.pi * th))
        zp = outer_step_cartesian(outer_unit, z)
        assert np.allclose((z + zp) / 2, q, atol=1e-12)

    def test_circle_rotation(self, outer_unit):
        zp = outer_step_cartesian(outer_unit, np.array([2.0, 0.0]))
        assert np.allclose(zp, [2 * math.cos(2 * math.pi / 3), 2 * math.sin(2 * math.pi / 3)], atol=1e-12)

    @given(st.floats(1.05, 5.0), st.floats(0.0, 2 * math.pi))
    def test_circle_distance_preserved(self, d, ang):
        m = make_model("outer", circle(2 * math.pi))
        zp = outer_step_cartesian(m, np.array([d * math.cos(ang), d * math.sin(ang)]))
        assert np.linalg.norm(zp) == pytest.approx(d, abs=1e-11)

    def test_envelope_value(self, outer_unit):
        assert envelope_coords(outer_unit, np.array([2.0, 0.0]))[1] == pytest.approx(1.5, abs=1e-12)

    def test_envelope_vanishes_at_boundary(self, outer_unit):
        # points on the tangent line at the bottom, approaching the tangency point
        r = [envelope_coords(outer_unit, np.array([d, -1.0]))[1] for d in (0.1, 0.01, 0.001)]
        assert r[-1] < r[1] < r[0] and r[-1] < 1e-6

    def test_roundtrip(self, ellipse_e05):
        m = make_model("outer", ellipse_e05)
        rng = np.random.default_rng(7)
        for _ in range(100):
            ang, rad = rng.uniform(0, 2 * math.pi), rng.uniform(0.2, 2.0)
            z = np.array([rad * math.cos(ang), rad * math.sin(ang)])
            z *= 1 + 0.5 / np.linalg.norm(z) if np.linalg.norm(z) < 0.5 else 1
            try:
                th, r = envelope_coords(m, z)
            except DomainError:
                continue  # interior sample
            assert np.allclose(envelope_to_cartesian(m, th, r), z, atol=1e-10)

    def test_step_circle(self, outer_unit):
        th, r = envelope_coords(outer_unit, np.array([2.0, 0.0]))
        th1, r1 = outer_step(outer_unit, th, r)
        assert th1 - th == pytest.approx(1 / 3, abs=1e-12)
        assert r1 == pytest.approx(r, abs=1e-12)

    def test_agrees_with_affine_oracle(self):
        a, b = 1.0, math.sqrt(0.75)
        m = make_model("outer", ellipse(a, b, normalize=False))
        for z in ([1.5, 1.2], [-0.3, 2.0], [3.0, -0.1]):
            assert np.allclose(outer_step_cartesian(m, np.array(z)), outer_ellipse_step(a, b, z), atol=1e-10)

    def test_conic(self, ellipse_e05):
        m = make_model("outer", ellipse_e05)
        orb = iterate(m, (0.1, m.from_chart(0.1, 0.4)), 200)
        pts = [envelope_to_cartesian(m, q, p) for q, p in zip(orb.q, orb.p)]
        assert conic_fit_residual(pts) < 1e-6

    def test_conic_fit_detects_non_conic(self):
        t = np.linspace(0, 2 * math.pi, 50, endpoint=False)
        pts = np.column_stack([np.cos(t) * (1 + 0.1 * np.cos(3 * t)), np.sin(t)])
        assert conic_fit_residual(pts) > 1e-3

    def test_interior_rejected(self, outer_unit):
        with pytest.raises(DomainError):
            outer_step_cartesian(outer_unit, np.array([0.5, 0.0]))


class TestSymplectic:
    def test_midpoint_rule(self, symp_unit):
        assert symplectic_step(symp_unit, 0.0, 0.25) == pytest.approx((0.25, 0.5), abs=1e-12)
        assert symplectic_step(symp_unit, 0.0, 1 / 3) == pytest.approx((1 / 3, 2 / 3), abs=1e-12)

    @given(st.floats(0.0, 1.0), st.floats(0.02, 0.48))
    def test_rigid_rotation(self, t1, gap):
        m = make_model("symplectic", circle(2 * math.pi))
        t2, t3 = symplectic_step(m, t1, t1 + gap)
        assert abs(t3 - 2 * t2 + t1) < 1e-10

    def test_antipode_excluded(self, symp_unit):
        with pytest.raises(DomainError):
            symplectic_step(symp_unit, 0.0, 0.5)

    def test_twist_coords(self, symp_unit):
        assert symplectic_twist_coords(symp_unit, 0.0, 0.25)[1] == pytest.approx(0.0, abs=1e-12)

    def test_bounds(self, symp_unit):
        assert s_minus(symp_unit, 0.3) == pytest.approx(-2 * math.pi, abs=1e-12)
        assert s_plus(symp_unit, 0.3) == pytest.approx(2 * math.pi, abs=1e-12)

    def test_fiber_monotone_on_ellipse(self, ellipse_half):
        m = make_model("symplectic", ellipse_half)
        t2 = np.linspace(0.2 + 1e-3, 0.7 - 1e-3, 100)
        s1 = [symplectic_twist_coords(m, 0.2, t)[1] for t in t2]
        assert np.all(np.diff(s1) > 0)

    def test_parallel_chord(self, ellipse_half):
        # chord gamma(t1) gamma(t3) is parallel to the tangent at gamma(t2)
        m = make_model("symplectic", ellipse_half)
        t1, t2 = 0.1, 0.35
        _, t3 = symplectic_step(m, t1, t2)
        chord = np.subtract(m.gamma(t3), m.gamma(t1))
        tan = m.dgamma(t2)
        assert abs(chord[0] * tan[1] - chord[1] * tan[0]) < 1e-12


@pytest.mark.parametrize("kind", ["birkhoff", "symplectic"])
@pytest.mark.parametrize("domain", ["circle1", "ellipse_e05"])
def test_generating_contracts(kind, domain, request):
    m = make_model(kind, request.getfixturevalue(domain))
    pts = phase_grid(m, 8, 8)
    assert check_exactness(m, pts) < 1e-6
    assert check_twist_relation(m, pts).max_residual < 1e-6
