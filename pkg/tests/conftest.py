"""Shared geometric fixtures: the two closed-form curves used throughout.

helix_curve: the unit-speed helix u = v = s/sqrt(2) on the unit cylinder
(outward normal).  Closed forms: k_g = 0, k_n = -1/2, tau_g = 1/2,
kappa = tau = 1/2, V = (sin(u), -cos(u), 1)/sqrt(2).

latitude_curve: the latitude circle v0 = pi/4 on the unit sphere, u = s/cos(v0).
Closed forms: k_g = tan(v0) = 1, k_n = -1, tau_g = 0, kappa = sqrt(2), tau = 0,
U = gamma (outward).
"""

import math

import numpy as np
import pytest

import darboux
from darboux.frames import ChartPath, CurveOnSurface

SQRT2 = math.sqrt(2.0)
V0 = math.pi / 4


def constant_speed_path(cu, cv, du, dv, s_range):
    """Chart path with constant derivative (du, dv) from point (cu, cv)."""
    return ChartPath(
        lambda s: cu + du * s, lambda s: cv + dv * s,
        lambda s: du, lambda s: dv,
        lambda s: 0.0, lambda s: 0.0,
        lambda s: 0.0, lambda s: 0.0,
        s_range,
    )


def make_helix_curve(s_max=4 * math.pi):
    path = constant_speed_path(0.0, 0.0, 1 / SQRT2, 1 / SQRT2, (0.0, s_max))
    return CurveOnSurface(darboux.cylinder(1.0), chart_path=path)


def make_latitude_curve():
    c = math.cos(V0)
    path = constant_speed_path(0.0, V0, 1 / c, 0.0, (0.0, 2 * math.pi * c))
    return CurveOnSurface(darboux.sphere(1.0), chart_path=path)


def make_line_on_plane(s_max=5.0):
    path = constant_speed_path(0.0, 0.0, 1.0, 0.0, (0.0, s_max))
    return CurveOnSurface(darboux.plane(), chart_path=path)


def make_circle_on_plane():
    """Origin-centered unit circle on the plane z = 0."""
    path = ChartPath(
        lambda s: math.cos(s), lambda s: math.sin(s),
        lambda s: -math.sin(s), lambda s: math.cos(s),
        lambda s: -math.cos(s), lambda s: -math.sin(s),
        lambda s: math.sin(s), lambda s: -math.cos(s),
        (0.0, 2 * math.pi),
    )
    return CurveOnSurface(darboux.plane(), chart_path=path)


def make_latitude_on_implicit_sphere():
    """The same latitude circle as a space curve on the implicit unit sphere."""
    c = math.cos(V0)
    z0 = math.sin(V0)

    def gamma(s):
        return np.array([c * math.cos(s / c), c * math.sin(s / c), z0])

    def d1(s):
        return np.array([-math.sin(s / c), math.cos(s / c), 0.0])

    def d2(s):
        return np.array([-math.cos(s / c) / c, -math.sin(s / c) / c, 0.0])

    def d3(s):
        return np.array([math.sin(s / c) / c**2, -math.cos(s / c) / c**2, 0.0])

    curve = darboux.UnitSpeedCurve(gamma, d1, d2, d3, 2 * math.pi * c)
    return CurveOnSurface(darboux.implicit_sphere(1.0), space_curve=curve)


def make_unit_helix_space_curve(s_max=4 * math.pi):
    """The b=1 helix as a bare unit-speed space curve."""

    def gamma(s):
        t = s / SQRT2
        return np.array([math.cos(t), math.sin(t), t])

    def d1(s):
        t = s / SQRT2
        return np.array([-math.sin(t), math.cos(t), 1.0]) / SQRT2

    def d2(s):
        t = s / SQRT2
        return np.array([-math.cos(t), -math.sin(t), 0.0]) / 2.0

    def d3(s):
        t = s / SQRT2
        return np.array([math.sin(t), -math.cos(t), 0.0]) / (2.0 * SQRT2)

    return darboux.UnitSpeedCurve(gamma, d1, d2, d3, s_max)


@pytest.fixture
def helix_curve():
    return make_helix_curve()


@pytest.fixture
def latitude_curve():
    return make_latitude_curve()


@pytest.fixture
def helix_grid():
    return np.linspace(0.0, 4.0, 201)


@pytest.fixture
def latitude_grid():
    return np.linspace(0.0, 2 * math.pi * math.cos(V0), 201)
