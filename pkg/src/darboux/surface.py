"""Parametric and implicit surfaces with analytic jets to third order.

All points and frame vectors are plain numpy arrays of shape (3,), float64.
Catalog surfaces (sphere, cylinder, plane, torus, helicoid, ellipsoid,
monkey saddle) carry hand-written jets; surfaces built from expression text
get exact jets from symbolic differentiation, which keeps the two routes
independent for testing.

Orientation conventions: the parametric unit normal is sigma_u x sigma_v
normalized; the implicit unit normal is grad(f)/|grad(f)|.  Sign-sensitive
quantities (normal curvature, geodesic torsion) inherit these choices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable
from urllib.parse import parse_qsl

import numpy as np

from . import expr as _expr
from .errors import (
    DarbouxError,
    OutOfDomainError,
    ProjectionError,
    RegularityError,
)

__all__ = [
    "FirstForm",
    "ChartJet",
    "ParametricSurface",
    "ImplicitSurface",
    "chart_jet",
    "first_form",
    "unit_normal",
    "normal_derivatives",
    "implicit_jet",
    "project_to_implicit",
    "sphere",
    "cylinder",
    "plane",
    "torus",
    "helicoid",
    "ellipsoid",
    "monkey_saddle",
    "implicit_sphere",
    "implicit_cylinder",
    "implicit_plane",
    "implicit_torus",
    "parse_surface_spec",
    "CATALOG",
]

EPS_REG_DEFAULT = 1e-10
# Chart poles (e.g. sphere v = +-pi/2) are excluded by shrinking the domain.
POLE_MARGIN = 1e-6


def vec(x, y, z) -> np.ndarray:
    return np.array([x, y, z], dtype=float)


@dataclass(frozen=True)
class FirstForm:
    """First-fundamental-form coefficients E, F, G of a chart."""

    E: float
    F: float
    G: float

    @property
    def det(self) -> float:
        return self.E * self.G - self.F * self.F

    @property
    def area_element(self) -> float:
        return math.sqrt(self.det)


@dataclass(frozen=True)
class ChartJet:
    """Chart map value and partials to second order at one (u, v)."""

    sigma: np.ndarray
    sigma_u: np.ndarray
    sigma_v: np.ndarray
    sigma_uu: np.ndarray
    sigma_uv: np.ndarray
    sigma_vv: np.ndarray


class ParametricSurface:
    """Chart map sigma(u, v) with analytic partials.

    ``jet_fn(u, v)`` returns the six ChartJet vectors; ``jet3_fn(u, v)``,
    when present, returns the four third partials (uuu, uuv, uvv, vvv) used
    for analytic derivatives of frame scalars.  Domain is a rectangle with
    optional periodic wrapping per parameter.
    """

    def __init__(
        self,
        name: str,
        jet_fn: Callable,
        u_range: tuple[float, float],
        v_range: tuple[float, float],
        periodic_u: bool = False,
        periodic_v: bool = False,
        jet3_fn: Callable | None = None,
        eps_reg: float = EPS_REG_DEFAULT,
    ):
        self.name = name
        self._jet_fn = jet_fn
        self._jet3_fn = jet3_fn
        self.u_range = (float(u_range[0]), float(u_range[1]))
        self.v_range = (float(v_range[0]), float(v_range[1]))
        self.periodic_u = bool(periodic_u)
        self.periodic_v = bool(periodic_v)
        self.eps_reg = float(eps_reg)
        # single-entry memos: traces and frame sampling query the same
        # point many times in a row (callers never mutate jets)
        self._jet_memo = None
        self._nd_memo = None

    def __repr__(self):
        return f"ParametricSurface({self.name!r})"

    @property
    def has_jet3(self) -> bool:
        return self._jet3_fn is not None

    def wrap(self, u: float, v: float) -> tuple[float, float]:
        """Wrap periodic parameters into range; raise if outside a
        non-periodic range."""
        u = self._wrap1(u, self.u_range, self.periodic_u, "u")
        v = self._wrap1(v, self.v_range, self.periodic_v, "v")
        return u, v

    def _wrap1(self, t, rng, periodic, label):
        lo, hi = rng
        if periodic:
            period = hi - lo
            return (t - lo) % period + lo
        if t < lo or t > hi:
            raise OutOfDomainError(
                f"{self.name}: parameter {label}={float(t):g} outside [{lo:g}, {hi:g}]"
            )
        return t

    def contains(self, u: float, v: float) -> bool:
        try:
            self.wrap(u, v)
        except OutOfDomainError:
            return False
        return True

    def chart_jet(self, u: float, v: float) -> ChartJet:
        u, v = self.wrap(u, v)
        memo = self._jet_memo
        if memo is not None and memo[0] == (u, v):
            return memo[1]
        jet = ChartJet(*self._jet_fn(u, v))
        w = np.cross(jet.sigma_u, jet.sigma_v)
        if np.linalg.norm(w) <= self.eps_reg:
            raise RegularityError(
                f"{self.name}: |sigma_u x sigma_v| <= {self.eps_reg:g} "
                f"at (u, v)=({float(u):g}, {float(v):g})"
            )
        self._jet_memo = ((u, v), jet)
        return jet

    def jet3(self, u: float, v: float):
        """Third partials (sigma_uuu, sigma_uuv, sigma_uvv, sigma_vvv)."""
        if self._jet3_fn is None:
            return None
        u, v = self.wrap(u, v)
        return tuple(np.asarray(a, dtype=float) for a in self._jet3_fn(u, v))

    def first_form(self, u: float, v: float) -> FirstForm:
        return first_form(self.chart_jet(u, v))

    def unit_normal(self, u: float, v: float) -> np.ndarray:
        return unit_normal(self.chart_jet(u, v))

    def normal_derivatives(self, u: float, v: float):
        return normal_derivatives(self, u, v)

    def normal_second_derivatives(self, u: float, v: float):
        """Second partials (U_uu, U_uv, U_vv) of the unit normal.

        Requires third-order jets; quotient rule applied twice to
        w = sigma_u x sigma_v.
        """
        third = self.jet3(u, v)
        if third is None:
            raise DarbouxError(f"{self.name}: third-order jets unavailable")
        jet = self.chart_jet(u, v)
        suuu, suuv, suvv, svvv = third
        w = np.cross(jet.sigma_u, jet.sigma_v)
        w_u = np.cross(jet.sigma_uu, jet.sigma_v) + np.cross(jet.sigma_u, jet.sigma_uv)
        w_v = np.cross(jet.sigma_uv, jet.sigma_v) + np.cross(jet.sigma_u, jet.sigma_vv)
        w_uu = (
            np.cross(suuu, jet.sigma_v)
            + 2.0 * np.cross(jet.sigma_uu, jet.sigma_uv)
            + np.cross(jet.sigma_u, suuv)
        )
        w_uv = (
            np.cross(suuv, jet.sigma_v)
            + np.cross(jet.sigma_uu, jet.sigma_vv)
            + np.cross(jet.sigma_uv, jet.sigma_uv)
            + np.cross(jet.sigma_u, suvv)
        )
        w_vv = (
            np.cross(suvv, jet.sigma_v)
            + 2.0 * np.cross(jet.sigma_uv, jet.sigma_vv)
            + np.cross(jet.sigma_u, svvv)
        )
        return (
            _unit_vector_second_derivative(w, w_u, w_u, w_uu),
            _unit_vector_second_derivative(w, w_u, w_v, w_uv),
            _unit_vector_second_derivative(w, w_v, w_v, w_vv),
        )


def _unit_vector_derivative(w: np.ndarray, w_a: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(w)
    return w_a / n - w * (w @ w_a) / n**3


def _unit_vector_second_derivative(w, w_a, w_b, w_ab):
    # d_b d_a (w/|w|) for |w| = n: expand the quotient rule once more.
    n = np.linalg.norm(w)
    na = (w @ w_a) / n
    nb = (w @ w_b) / n
    nab = (w_b @ w_a + w @ w_ab - na * nb) / n
    return (
        w_ab / n
        - (w_a * nb + w_b * na + w * nab) / n**2
        + 2.0 * w * na * nb / n**3
    )


class ImplicitSurface:
    """Level set f(x, y, z) = 0 with analytic gradient and Hessian."""

    def __init__(
        self,
        name: str,
        f: Callable,
        grad: Callable,
        hess: Callable,
        eps_reg: float = EPS_REG_DEFAULT,
    ):
        self.name = name
        self._f = f
        self._grad = grad
        self._hess = hess
        self.eps_reg = float(eps_reg)

    def __repr__(self):
        return f"ImplicitSurface({self.name!r})"

    def value(self, p: np.ndarray) -> float:
        return float(self._f(np.asarray(p, dtype=float)))

    def gradient(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(self._grad(np.asarray(p, dtype=float)), dtype=float)

    def hessian(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(self._hess(np.asarray(p, dtype=float)), dtype=float)

    def jet(self, p: np.ndarray):
        p = np.asarray(p, dtype=float)
        return self.value(p), self.gradient(p), self.hessian(p)

    def unit_normal(self, p: np.ndarray) -> np.ndarray:
        g = self.gradient(p)
        n = np.linalg.norm(g)
        if n <= self.eps_reg:
            raise RegularityError(f"{self.name}: |grad f| <= {self.eps_reg:g} at {p!r}")
        return g / n

    def normal_jacobian(self, p: np.ndarray) -> np.ndarray:
        """d/dp of grad(f)/|grad(f)| as a 3x3 matrix."""
        g = self.gradient(p)
        H = self.hessian(p)
        n = np.linalg.norm(g)
        if n <= self.eps_reg:
            raise RegularityError(f"{self.name}: |grad f| <= {self.eps_reg:g} at {p!r}")
        return H / n - np.outer(g, g @ H) / n**3


# ---------------------------------------------------------------------------
# Module-level operations (thin wrappers with the jet-based signatures)


def chart_jet(surface: ParametricSurface, u: float, v: float) -> ChartJet:
    """Chart value and partials to 2nd order at (u, v), after periodic wrap."""
    return surface.chart_jet(u, v)


def first_form(jet: ChartJet) -> FirstForm:
    """E = sigma_u.sigma_u, F = sigma_u.sigma_v, G = sigma_v.sigma_v."""
    return FirstForm(
        float(jet.sigma_u @ jet.sigma_u),
        float(jet.sigma_u @ jet.sigma_v),
        float(jet.sigma_v @ jet.sigma_v),
    )


def unit_normal(jet: ChartJet) -> np.ndarray:
    """sigma_u x sigma_v, normalized (orientation fixed by chart order)."""
    w = np.cross(jet.sigma_u, jet.sigma_v)
    n = np.linalg.norm(w)
    if n <= EPS_REG_DEFAULT:
        raise RegularityError(f"|sigma_u x sigma_v| = {n:g} below regularity threshold")
    return w / n


def normal_derivatives(surface: ParametricSurface, u: float, v: float):
    """Analytic partials (U_u, U_v) of the unit normal via the quotient rule
    on w = sigma_u x sigma_v."""
    u, v = surface.wrap(u, v)
    memo = surface._nd_memo
    if memo is not None and memo[0] == (u, v):
        return memo[1]
    jet = surface.chart_jet(u, v)
    w = np.cross(jet.sigma_u, jet.sigma_v)
    w_u = np.cross(jet.sigma_uu, jet.sigma_v) + np.cross(jet.sigma_u, jet.sigma_uv)
    w_v = np.cross(jet.sigma_uv, jet.sigma_v) + np.cross(jet.sigma_u, jet.sigma_vv)
    result = (_unit_vector_derivative(w, w_u), _unit_vector_derivative(w, w_v))
    surface._nd_memo = ((u, v), result)
    return result


def implicit_jet(surface: ImplicitSurface, p: np.ndarray):
    """(f, grad f, Hessian) at p."""
    return surface.jet(p)


def project_to_implicit(surface: ImplicitSurface, p: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Newton-project p onto f = 0 along grad f: p <- p - f grad/|grad|^2.

    At most 8 iterations; raises ProjectionError on non-convergence and
    RegularityError on a vanishing gradient.
    """
    p = np.asarray(p, dtype=float).copy()
    for _ in range(8):
        f = surface.value(p)
        if abs(f) <= tol:
            return p
        g = surface.gradient(p)
        g2 = float(g @ g)
        if g2 <= surface.eps_reg**2:
            raise RegularityError(f"{surface.name}: vanishing gradient near {p!r}")
        p -= f * g / g2
    if abs(surface.value(p)) <= tol:
        return p
    raise ProjectionError(
        f"{surface.name}: projection did not reach |f| <= {tol:g} in 8 iterations"
    )


# ---------------------------------------------------------------------------
# Catalog surfaces (hand-written analytic jets)


def sphere(r: float = 1.0, eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = r (cos v cos u, cos v sin u, sin v); poles excluded."""
    r = float(r)

    def jet(u, v):
        cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
        return (
            vec(r * cv * cu, r * cv * su, r * sv),
            vec(-r * cv * su, r * cv * cu, 0.0),
            vec(-r * sv * cu, -r * sv * su, r * cv),
            vec(-r * cv * cu, -r * cv * su, 0.0),
            vec(r * sv * su, -r * sv * cu, 0.0),
            vec(-r * cv * cu, -r * cv * su, -r * sv),
        )

    def jet3(u, v):
        cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
        return (
            vec(r * cv * su, -r * cv * cu, 0.0),
            vec(r * sv * cu, r * sv * su, 0.0),
            vec(r * cv * su, -r * cv * cu, 0.0),
            vec(r * sv * cu, r * sv * su, -r * cv),
        )

    half = math.pi / 2 - POLE_MARGIN
    return ParametricSurface(
        f"sphere(r={r:g})", jet, (-math.pi, math.pi), (-half, half),
        periodic_u=True, jet3_fn=jet3, eps_reg=eps_reg,
    )


def cylinder(r: float = 1.0, v_range: tuple[float, float] = (-20.0, 20.0),
             eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = (r cos u, r sin u, v)."""
    r = float(r)
    zero = vec(0.0, 0.0, 0.0)

    def jet(u, v):
        cu, su = math.cos(u), math.sin(u)
        return (
            vec(r * cu, r * su, v),
            vec(-r * su, r * cu, 0.0),
            vec(0.0, 0.0, 1.0),
            vec(-r * cu, -r * su, 0.0),
            zero,
            zero,
        )

    def jet3(u, v):
        cu, su = math.cos(u), math.sin(u)
        return (vec(r * su, -r * cu, 0.0), zero, zero, zero)

    return ParametricSurface(
        f"cylinder(r={r:g})", jet, (-math.pi, math.pi), v_range,
        periodic_u=True, jet3_fn=jet3, eps_reg=eps_reg,
    )


def plane(u_range=(-20.0, 20.0), v_range=(-20.0, 20.0),
          eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = (u, v, 0)."""
    zero = vec(0.0, 0.0, 0.0)

    def jet(u, v):
        return (vec(u, v, 0.0), vec(1.0, 0.0, 0.0), vec(0.0, 1.0, 0.0), zero, zero, zero)

    def jet3(u, v):
        return (zero, zero, zero, zero)

    return ParametricSurface("plane", jet, u_range, v_range, jet3_fn=jet3, eps_reg=eps_reg)


def torus(R: float = 2.0, r: float = 0.5, eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = ((R + r cos v) cos u, (R + r cos v) sin u, r sin v)."""
    R, r = float(R), float(r)

    def jet(u, v):
        cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
        rho = R + r * cv
        rho_v = -r * sv
        return (
            vec(rho * cu, rho * su, r * sv),
            vec(-rho * su, rho * cu, 0.0),
            vec(rho_v * cu, rho_v * su, r * cv),
            vec(-rho * cu, -rho * su, 0.0),
            vec(-rho_v * su, rho_v * cu, 0.0),
            vec(-r * cv * cu, -r * cv * su, -r * sv),
        )

    def jet3(u, v):
        cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
        rho = R + r * cv
        rho_v = -r * sv
        rho_vv = -r * cv
        rho_vvv = r * sv
        return (
            vec(rho * su, -rho * cu, 0.0),
            vec(-rho_v * cu, -rho_v * su, 0.0),
            vec(-rho_vv * su, rho_vv * cu, 0.0),
            vec(rho_vvv * cu, rho_vvv * su, -r * cv),
        )

    return ParametricSurface(
        f"torus(R={R:g},r={r:g})", jet, (-math.pi, math.pi), (-math.pi, math.pi),
        periodic_u=True, periodic_v=True, jet3_fn=jet3, eps_reg=eps_reg,
    )


def helicoid(a: float = 1.0, u_range=(-2 * math.pi, 2 * math.pi), v_range=(-5.0, 5.0),
             eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = (v cos u, v sin u, a u)."""
    a = float(a)
    zero = vec(0.0, 0.0, 0.0)

    def jet(u, v):
        cu, su = math.cos(u), math.sin(u)
        return (
            vec(v * cu, v * su, a * u),
            vec(-v * su, v * cu, a),
            vec(cu, su, 0.0),
            vec(-v * cu, -v * su, 0.0),
            vec(-su, cu, 0.0),
            zero,
        )

    def jet3(u, v):
        cu, su = math.cos(u), math.sin(u)
        return (vec(v * su, -v * cu, 0.0), vec(-cu, -su, 0.0), zero, zero)

    return ParametricSurface(
        f"helicoid(a={a:g})", jet, u_range, v_range, jet3_fn=jet3, eps_reg=eps_reg,
    )


def ellipsoid(a: float = 2.0, b: float = 1.5, c: float = 1.0,
              eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = (a cos v cos u, b cos v sin u, c sin v); poles excluded."""
    scale = np.array([float(a), float(b), float(c)])
    base = sphere(1.0, eps_reg=eps_reg)

    def jet(u, v):
        return tuple(scale * w for w in base._jet_fn(u, v))

    def jet3(u, v):
        return tuple(scale * w for w in base._jet3_fn(u, v))

    half = math.pi / 2 - POLE_MARGIN
    return ParametricSurface(
        f"ellipsoid(a={a:g},b={b:g},c={c:g})", jet, (-math.pi, math.pi), (-half, half),
        periodic_u=True, jet3_fn=jet3, eps_reg=eps_reg,
    )


def monkey_saddle(u_range=(-2.0, 2.0), v_range=(-2.0, 2.0),
                  eps_reg: float = EPS_REG_DEFAULT) -> ParametricSurface:
    """sigma = (u, v, u^3 - 3 u v^2)."""
    zero = vec(0.0, 0.0, 0.0)

    def jet(u, v):
        return (
            vec(u, v, u**3 - 3.0 * u * v * v),
            vec(1.0, 0.0, 3.0 * u * u - 3.0 * v * v),
            vec(0.0, 1.0, -6.0 * u * v),
            vec(0.0, 0.0, 6.0 * u),
            vec(0.0, 0.0, -6.0 * v),
            vec(0.0, 0.0, -6.0 * u),
        )

    def jet3(u, v):
        return (vec(0.0, 0.0, 6.0), zero, vec(0.0, 0.0, -6.0), zero)

    return ParametricSurface("monkey_saddle", jet, u_range, v_range, jet3_fn=jet3, eps_reg=eps_reg)


# ---------------------------------------------------------------------------
# Catalog implicit surfaces


def implicit_sphere(r: float = 1.0, eps_reg: float = EPS_REG_DEFAULT) -> ImplicitSurface:
    """f = x^2 + y^2 + z^2 - r^2 (outward normal)."""
    r2 = float(r) ** 2
    return ImplicitSurface(
        f"implicit_sphere(r={r:g})",
        lambda p: p @ p - r2,
        lambda p: 2.0 * p,
        lambda p: 2.0 * np.eye(3),
        eps_reg=eps_reg,
    )


def implicit_cylinder(r: float = 1.0, eps_reg: float = EPS_REG_DEFAULT) -> ImplicitSurface:
    """f = x^2 + y^2 - r^2."""
    r2 = float(r) ** 2
    return ImplicitSurface(
        f"implicit_cylinder(r={r:g})",
        lambda p: p[0] ** 2 + p[1] ** 2 - r2,
        lambda p: vec(2.0 * p[0], 2.0 * p[1], 0.0),
        lambda p: np.diag([2.0, 2.0, 0.0]),
        eps_reg=eps_reg,
    )


def implicit_plane(eps_reg: float = EPS_REG_DEFAULT) -> ImplicitSurface:
    """f = z."""
    return ImplicitSurface(
        "implicit_plane",
        lambda p: p[2],
        lambda p: vec(0.0, 0.0, 1.0),
        lambda p: np.zeros((3, 3)),
        eps_reg=eps_reg,
    )


def implicit_torus(R: float = 2.0, r: float = 0.5, eps_reg: float = EPS_REG_DEFAULT) -> ImplicitSurface:
    """f = (x^2 + y^2 + z^2 + R^2 - r^2)^2 - 4 R^2 (x^2 + y^2)."""
    R, r = float(R), float(r)
    A = R * R - r * r
    fourR2 = 4.0 * R * R

    def f(p):
        w = p @ p
        return (w + A) ** 2 - fourR2 * (p[0] ** 2 + p[1] ** 2)

    def grad(p):
        w = p @ p
        g = 4.0 * (w + A) * p
        g[0] -= 2.0 * fourR2 * p[0]
        g[1] -= 2.0 * fourR2 * p[1]
        return g

    def hess(p):
        w = p @ p
        H = 8.0 * np.outer(p, p) + 4.0 * (w + A) * np.eye(3)
        H[0, 0] -= 2.0 * fourR2
        H[1, 1] -= 2.0 * fourR2
        return H

    return ImplicitSurface(f"implicit_torus(R={R:g},r={r:g})", f, grad, hess, eps_reg=eps_reg)


# ---------------------------------------------------------------------------
# Expression-backed surfaces (jets from symbolic differentiation)


def parametric_from_expressions(
    x_src: str,
    y_src: str,
    z_src: str,
    u_range: tuple[float, float],
    v_range: tuple[float, float],
    periodic_u: bool = False,
    periodic_v: bool = False,
    eps_reg: float = EPS_REG_DEFAULT,
    name: str = "param_expr",
) -> ParametricSurface:
    """Build a ParametricSurface from component expressions in (u, v)."""
    comps = [_expr.parse(src, ["u", "v"]) for src in (x_src, y_src, z_src)]

    def d(e, *vars_):
        for w in vars_:
            e = _expr.differentiate(e, w)
        return e

    orders = {
        "": comps,
        "u": [d(e, "u") for e in comps],
        "v": [d(e, "v") for e in comps],
        "uu": [d(e, "u", "u") for e in comps],
        "uv": [d(e, "u", "v") for e in comps],
        "vv": [d(e, "v", "v") for e in comps],
        "uuu": [d(e, "u", "u", "u") for e in comps],
        "uuv": [d(e, "u", "u", "v") for e in comps],
        "uvv": [d(e, "u", "v", "v") for e in comps],
        "vvv": [d(e, "v", "v", "v") for e in comps],
    }

    def ev(key, env):
        return np.array([_expr.evaluate(e, env) for e in orders[key]])

    def jet(u, v):
        env = {"u": u, "v": v}
        return tuple(ev(k, env) for k in ("", "u", "v", "uu", "uv", "vv"))

    def jet3(u, v):
        env = {"u": u, "v": v}
        return tuple(ev(k, env) for k in ("uuu", "uuv", "uvv", "vvv"))

    return ParametricSurface(
        name, jet, u_range, v_range,
        periodic_u=periodic_u, periodic_v=periodic_v, jet3_fn=jet3, eps_reg=eps_reg,
    )


def implicit_from_expression(f_src: str, eps_reg: float = EPS_REG_DEFAULT,
                             name: str = "implicit_expr") -> ImplicitSurface:
    """Build an ImplicitSurface from an expression in (x, y, z).

    The Hessian is assembled from its six independent entries (symbolic
    second partials of f), mirrored into the symmetric 3x3.
    """
    f = _expr.parse(f_src, ["x", "y", "z"])
    grads = [_expr.differentiate(f, w) for w in ("x", "y", "z")]
    upper = {
        (i, j): _expr.differentiate(grads[i], "xyz"[j])
        for i in range(3)
        for j in range(i, 3)
    }

    def env(p):
        return {"x": p[0], "y": p[1], "z": p[2]}

    def hess(p):
        e = env(p)
        H = np.empty((3, 3))
        for (i, j), ex in upper.items():
            H[i, j] = H[j, i] = _expr.evaluate(ex, e)
        return H

    return ImplicitSurface(
        name,
        lambda p: _expr.evaluate(f, env(p)),
        lambda p: np.array([_expr.evaluate(g, env(p)) for g in grads]),
        hess,
        eps_reg=eps_reg,
    )


# ---------------------------------------------------------------------------
# Surface spec strings (CLI front end)

CATALOG = {
    "sphere": (sphere, implicit_sphere),
    "cylinder": (cylinder, implicit_cylinder),
    "plane": (plane, implicit_plane),
    "torus": (torus, implicit_torus),
    "helicoid": (helicoid, None),
    "ellipsoid": (ellipsoid, None),
    "monkey_saddle": (monkey_saddle, None),
}


def parse_surface_spec(spec: str, implicit: bool = False, eps_reg: float = EPS_REG_DEFAULT):
    """Parse a surface spec string.

    Forms: ``builtin:sphere?r=1``, ``builtin:torus?R=2&r=0.5``,
    ``param:x=<expr>;y=<expr>;z=<expr>;u=<lo>,<hi>;v=<lo>,<hi>``,
    ``implicit:f=<expr>``.  With ``implicit=True`` a builtin name resolves
    to its implicit counterpart (where one exists).
    """
    if ":" not in spec:
        raise DarbouxError(f"surface spec needs a 'builtin:', 'param:' or 'implicit:' prefix: {spec!r}")
    kind, rest = spec.split(":", 1)
    if kind == "builtin":
        name, _, query = rest.partition("?")
        if name not in CATALOG:
            raise DarbouxError(f"unknown builtin surface {name!r} (see 'catalog')")
        parametric_ctor, implicit_ctor = CATALOG[name]
        params = {k: float(v) for k, v in parse_qsl(query)}
        if implicit:
            if implicit_ctor is None:
                raise DarbouxError(f"builtin {name!r} has no implicit form")
            return implicit_ctor(**params, eps_reg=eps_reg)
        return parametric_ctor(**params, eps_reg=eps_reg)
    if kind == "param":
        fields = _split_fields(rest)
        for key in ("x", "y", "z", "u", "v"):
            if key not in fields:
                raise DarbouxError(f"param surface spec missing {key}=...: {spec!r}")
        return parametric_from_expressions(
            fields["x"], fields["y"], fields["z"],
            _parse_range(fields["u"]), _parse_range(fields["v"]),
            periodic_u=fields.get("periodic", "").find("u") >= 0,
            periodic_v=fields.get("periodic", "").find("v") >= 0,
            eps_reg=eps_reg,
        )
    if kind == "implicit":
        fields = _split_fields(rest)
        if "f" not in fields:
            raise DarbouxError(f"implicit surface spec missing f=...: {spec!r}")
        return implicit_from_expression(fields["f"], eps_reg=eps_reg)
    raise DarbouxError(f"unknown surface spec kind {kind!r}")


def _split_fields(rest: str) -> dict[str, str]:
    fields = {}
    for part in rest.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise DarbouxError(f"bad spec field {part!r} (expected key=value)")
        key, value = part.split("=", 1)
        fields[key.strip()] = value.strip()
    return fields


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise DarbouxError(f"bad range {text!r} (expected lo,hi)") from None
    return lo, hi
