"""Frenet and Darboux frames: fixture oracles, structure relations, the
normal-angle series, and arclength reparametrization."""

import math

import numpy as np
import pytest

import darboux
from conftest import (
    SQRT2,
    V0,
    constant_speed_path,
    make_circle_on_plane,
    make_helix_curve,
    make_latitude_curve,
    make_latitude_on_implicit_sphere,
    make_line_on_plane,
    make_unit_helix_space_curve,
)
from darboux.errors import DarbouxError, FrenetUndefinedError, VanishingSpeedError
from darboux.frames import (
    ChartPath,
    CurveOnSurface,
    ParamCurve,
    UnitSpeedCurve,
    darboux as darboux_frame,
    deriv_uniform,
    frenet,
    normal_angle_series,
    resample_unit_speed,
    sample_frames,
    unit_speed_chart_curve,
)


class TestFrenet:
    def test_helix_curvature_torsion(self):
        # b = 1 circular helix: kappa = tau = 1/(1 + b^2) = 1/2
        c = make_unit_helix_space_curve()
        fr = frenet(c, 1.3)
        assert fr.kappa == pytest.approx(0.5, abs=1e-12)
        assert fr.tau == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(np.cross(fr.T, fr.N), fr.B, atol=1e-15)

    def test_circle_curvature(self):
        r = 2.5

        def gamma(s):
            return np.array([r * math.cos(s / r), r * math.sin(s / r), 0.0])

        def d1(s):
            return np.array([-math.sin(s / r), math.cos(s / r), 0.0])

        def d2(s):
            return np.array([-math.cos(s / r), -math.sin(s / r), 0.0]) / r

        def d3(s):
            return np.array([math.sin(s / r), -math.cos(s / r), 0.0]) / r**2

        c = UnitSpeedCurve(gamma, d1, d2, d3, 2 * math.pi * r)
        fr = frenet(c, 0.7)
        assert fr.kappa == pytest.approx(1 / r, abs=1e-12)
        assert fr.tau == pytest.approx(0.0, abs=1e-12)

    def test_straight_line_undefined(self):
        line = UnitSpeedCurve(
            lambda s: np.array([s, 0.0, 0.0]),
            lambda s: np.array([1.0, 0.0, 0.0]),
            lambda s: np.zeros(3),
            lambda s: np.zeros(3),
            10.0,
        )
        with pytest.raises(FrenetUndefinedError, match="Frenet frame undefined"):
            frenet(line, 1.0)


class TestDarboux:
    def test_helix_on_cylinder(self, helix_curve):
        fr = darboux_frame(helix_curve, 0.8)
        assert fr.kg == pytest.approx(0.0, abs=1e-12)
        assert fr.kn == pytest.approx(-0.5, abs=1e-12)
        assert fr.tg == pytest.approx(0.5, abs=1e-12)
        s = 0.8 / SQRT2
        expected_v = np.array([math.sin(s), -math.cos(s), 1.0]) / SQRT2
        np.testing.assert_allclose(fr.V, expected_v, atol=1e-12)

    def test_latitude_circle(self, latitude_curve):
        fr = darboux_frame(latitude_curve, 0.5)
        assert fr.kg == pytest.approx(1.0, abs=1e-12)  # tan(pi/4)
        assert fr.kn == pytest.approx(-1.0, abs=1e-12)
        assert fr.tg == pytest.approx(0.0, abs=1e-12)

    def test_straight_line_on_plane(self):
        fr = darboux_frame(make_line_on_plane(), 1.0)
        assert (fr.kg, fr.kn, fr.tg) == (0.0, 0.0, 0.0)

    def test_latitude_on_implicit_sphere_matches_chart(self, latitude_curve):
        imp = make_latitude_on_implicit_sphere()
        a = darboux_frame(latitude_curve, 0.9)
        b = darboux_frame(imp, 0.9)
        assert b.kg == pytest.approx(a.kg, abs=1e-12)
        assert b.kn == pytest.approx(a.kn, abs=1e-12)
        assert b.tg == pytest.approx(a.tg, abs=1e-12)
        np.testing.assert_allclose(a.U, b.U, atol=1e-12)

    def test_darboux_orthonormal_200_samples(self, helix_curve, latitude_curve):
        for curve in (helix_curve, latitude_curve):
            grid = np.linspace(*curve.s_range, 200)
            for s in grid:
                fr = darboux_frame(curve, s)
                M = np.vstack([fr.T, fr.V, fr.U])
                np.testing.assert_allclose(M @ M.T, np.eye(3), atol=1e-9)

    def test_v_equals_u_cross_t(self, latitude_curve):
        fr = darboux_frame(latitude_curve, 1.2)
        np.testing.assert_array_equal(fr.V, np.cross(fr.U, fr.T))

    def test_non_unit_speed_rejected(self):
        path = constant_speed_path(0.0, 0.0, 1.0, 1.0, (0.0, 2.0))  # speed sqrt(2)
        c = CurveOnSurface(darboux.cylinder(1.0), chart_path=path)
        with pytest.raises(DarbouxError, match="unit speed"):
            darboux_frame(c, 0.5)

    def test_curve_leaving_implicit_surface_rejected(self):
        line = UnitSpeedCurve(
            lambda s: np.array([1.0 + s, 0.0, 0.0]),
            lambda s: np.array([1.0, 0.0, 0.0]),
            lambda s: np.zeros(3),
            lambda s: np.zeros(3),
            1.0,
        )
        c = CurveOnSurface(darboux.implicit_sphere(1.0), space_curve=line)
        with pytest.raises(DarbouxError, match="leaves surface"):
            c.gamma_jet(0.5)


class TestStructureEquations:
    """Finite-difference frame derivatives against the Darboux matrix."""

    @pytest.mark.parametrize("maker", [make_helix_curve, make_latitude_curve],
                             ids=["helix", "latitude"])
    def test_frame_derivatives(self, maker):
        c = maker()
        h = 1e-6
        for s in np.linspace(0.2, 2.0, 7):
            f0 = darboux_frame(c, s - h)
            f1 = darboux_frame(c, s + h)
            fr = darboux_frame(c, s)
            T_prime = (f1.T - f0.T) / (2 * h)
            U_prime = (f1.U - f0.U) / (2 * h)
            V_prime = (f1.V - f0.V) / (2 * h)
            np.testing.assert_allclose(T_prime, fr.kg * fr.V + fr.kn * fr.U, atol=1e-6)
            np.testing.assert_allclose(U_prime, -fr.kn * fr.T - fr.tg * fr.V, atol=1e-6)
            np.testing.assert_allclose(V_prime, -fr.kg * fr.T + fr.tg * fr.U, atol=1e-6)

    def test_analytic_scalar_derivatives_match_fd(self):
        # a genuinely varying curve: reparametrized chart path on a torus.
        # The stencil converges at 4th order to the analytic values, so at
        # h ~ 1e-2 agreement to 1e-7 pins the analytic formulas.
        path = ChartPath.from_expressions("s", "0.8*s", (0.0, 3.0))
        c = unit_speed_chart_curve(darboux.torus(2.0, 0.5), path, n=256)
        grid = np.linspace(0.1, c.s_range[1] - 0.1, 401)
        data = sample_frames(c, grid)
        h = grid[1] - grid[0]
        np.testing.assert_allclose(deriv_uniform(data.kg, h), data.dkg, atol=1e-7)
        np.testing.assert_allclose(deriv_uniform(data.kn, h), data.dkn, atol=1e-7)
        np.testing.assert_allclose(deriv_uniform(data.tg, h), data.dtg, atol=1e-7)


class TestNormalAngleSeries:
    def test_helix_angle_and_residuals(self, helix_curve, helix_grid):
        series = normal_angle_series(helix_curve, helix_grid)
        np.testing.assert_allclose(series.theta, -math.pi / 2, atol=1e-12)
        assert np.abs(series.r1).max() <= 1e-9
        assert np.abs(series.r2).max() <= 1e-9
        assert np.abs(series.r3).max() <= 1e-9

    def test_latitude_angle(self, latitude_curve, latitude_grid):
        series = normal_angle_series(latitude_curve, latitude_grid)
        np.testing.assert_allclose(series.theta, -math.pi / 4, atol=1e-12)
        assert np.abs(series.r3).max() <= 1e-9

    def test_geodesic_angle_is_minus_half_pi(self, helix_curve, helix_grid):
        # geodesic <=> k_g = 0; with k_n < 0 the branch is exactly -pi/2
        series = normal_angle_series(helix_curve, helix_grid)
        assert series.theta[0] == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_unwrapping_is_continuous(self):
        c = make_circle_on_plane()
        grid = np.linspace(0.0, 2 * math.pi, 181)
        series = normal_angle_series(c, grid)
        assert np.abs(np.diff(series.theta)).max() < 0.2

    def test_generic_curve_torsion_relation(self):
        # a curve where theta genuinely varies: pins the signs in
        # tau_g = tau - theta' and the unwrap branch over several radians
        path = ChartPath.from_expressions("s", "0.9*s+0.2*sin(s)", (0.0, 5.0))
        c = unit_speed_chart_curve(darboux.torus(2.0, 0.5), path, n=512)
        grid = np.linspace(0.1, c.s_range[1] - 0.1, 401)
        series = normal_angle_series(c, grid)
        assert series.theta.max() - series.theta.min() > 2.0
        assert np.abs(series.r1).max() <= 1e-9
        assert np.abs(series.r2).max() <= 1e-9
        assert np.abs(series.r3).max() <= 1e-6

    def test_straight_line_rejected(self):
        with pytest.raises(FrenetUndefinedError):
            normal_angle_series(make_line_on_plane(), np.linspace(0.0, 2.0, 21))


class TestUnitSpeedCondition:
    @pytest.mark.parametrize("maker", [make_helix_curve, make_latitude_curve],
                             ids=["helix", "latitude"])
    def test_metric_residual(self, maker):
        c = maker()
        for s in np.linspace(*c.s_range, 50):
            u, v = c.path.point(s)
            ff = c.surface.first_form(u, v)
            du, dv = c.path.du(s), c.path.dv(s)
            residual = ff.E * du**2 + 2 * ff.F * du * dv + ff.G * dv**2 - 1.0
            assert abs(residual) <= 1e-9


class TestResample:
    def test_helix_length(self):
        raw = ParamCurve(
            lambda t: np.array([math.cos(t), math.sin(t), t]),
            lambda t: np.array([-math.sin(t), math.cos(t), 1.0]),
            lambda t: np.array([-math.cos(t), -math.sin(t), 0.0]),
            lambda t: np.array([math.sin(t), -math.cos(t), 0.0]),
            (0.0, 2 * math.pi),
        )
        c = resample_unit_speed(raw, 128)
        assert c.length == pytest.approx(2 * math.pi * SQRT2, abs=1e-9)
        for s in np.linspace(0.0, c.length, 25):
            assert np.linalg.norm(c.d1(s)) == pytest.approx(1.0, abs=1e-11)
        fr = frenet(c, 1.0)
        assert fr.kappa == pytest.approx(0.5, abs=1e-10)
        assert fr.tau == pytest.approx(0.5, abs=1e-9)

    def test_identity_on_unit_speed_input(self):
        raw = ParamCurve(
            lambda t: np.array([math.cos(t), math.sin(t), 0.0]),
            lambda t: np.array([-math.sin(t), math.cos(t), 0.0]),
            lambda t: np.array([-math.cos(t), -math.sin(t), 0.0]),
            lambda t: np.array([math.sin(t), -math.cos(t), 0.0]),
            (0.0, 2 * math.pi),
        )
        c = resample_unit_speed(raw, 64)
        assert c.length == pytest.approx(2 * math.pi, abs=1e-10)
        for s in (0.3, 1.7, 5.9):
            np.testing.assert_allclose(c.gamma(s),
                                       [math.cos(s), math.sin(s), 0.0], atol=1e-10)

    def test_vanishing_speed(self):
        raw = ParamCurve(
            lambda t: np.array([t**3, 0.0, 0.0]),
            lambda t: np.array([3 * t**2, 0.0, 0.0]),
            lambda t: np.array([6 * t, 0.0, 0.0]),
            lambda t: np.array([6.0, 0.0, 0.0]),
            (-0.1, 0.1),
        )
        with pytest.raises(VanishingSpeedError):
            resample_unit_speed(raw, 64)

    def test_chart_reparametrization_unit_speed(self):
        # u = v = s on the unit cylinder has metric speed sqrt(2)
        path = ChartPath.from_expressions("s", "s", (0.0, 2 * math.pi))
        c = unit_speed_chart_curve(darboux.cylinder(1.0), path, n=128)
        assert c.s_range[1] == pytest.approx(2 * math.pi * SQRT2, abs=1e-9)
        fr = darboux_frame(c, 1.0)
        assert fr.kn == pytest.approx(-0.5, abs=1e-9)
        assert fr.tg == pytest.approx(0.5, abs=1e-9)
        g, d1, d2, d3 = c.gamma_jet(2.0)
        assert np.linalg.norm(d1) == pytest.approx(1.0, abs=1e-11)


class TestPolyline:
    def test_from_samples_of_latitude_circle(self):
        c_exact = make_latitude_curve()
        n = 400
        L = c_exact.s_range[1]
        s = np.linspace(0.0, L, n)
        pts = np.array([c_exact.gamma_jet(t)[0] for t in s])
        poly = UnitSpeedCurve.from_polyline(pts, length=L)
        assert not poly.analytic
        cos = CurveOnSurface(darboux.implicit_sphere(1.0), space_curve=poly,
                             on_surface_tol=1e-6)
        fr = darboux_frame(cos, L / 2)
        assert fr.kn == pytest.approx(-1.0, abs=1e-4)
        assert fr.kg == pytest.approx(1.0, abs=1e-4)

    def test_rejects_too_few_samples(self):
        with pytest.raises(DarbouxError):
            UnitSpeedCurve.from_polyline(np.zeros((3, 3)))
