"""Isophote tracing: curves along which the surface normal keeps a constant
angle with a fixed axis.

The integrated field is the direction-free form of the constant-angle
condition: with g = <U, d>, an isophote is a level curve of g, so on a chart
the tangent solves g_u u' + g_v v' = 0 (normalized to unit metric speed) and
on an implicit surface it is grad(f) x grad(g), normalized.  The coefficient
forms Delta/Delta* (chart) and Omega (implicit) are kept as verification
operations evaluated with the realized direction: along a correct trace
Delta u' + Delta* v' and Omega . t vanish.

Integration is classical fixed-step RK4.  Branch continuity picks, at every
field evaluation, the sign that best aligns with the running tangent.
Implicit traces are Newton-projected back to f = 0 after every step.  When a
trace returns to its seed it is closed with one final shortened step landing
on the seed's transversal plane (the one sample exempt from the fixed-step
spacing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DarbouxError,
    OutOfDomainError,
    RegularityError,
    SeedError,
    SingularPointError,
)
from .frames import deriv_uniform
from .surface import (
    ImplicitSurface,
    ParametricSurface,
    first_form,
    project_to_implicit,
    unit_normal,
)

__all__ = [
    "TraceConfig",
    "TraceResult",
    "find_seed",
    "isophote_direction_parametric",
    "delta_coefficients",
    "isophote_direction_implicit",
    "omega_coefficients",
    "trace_isophote",
]

EPS_SING_DEFAULT = 1e-10


@dataclass
class TraceConfig:
    step: float = 1e-3
    max_length: float = 10.0
    branch: str = "plus"  # initial sign of the direction field
    closure_tol: float | None = None  # default 2 * step
    eps_sing: float = EPS_SING_DEFAULT
    projection_tol: float = 1e-12
    project_isophote: bool = False
    seed_tol: float = 1e-9

    def __post_init__(self):
        if self.step <= 0 or self.max_length <= 0:
            raise ValueError("step and max_length must be positive")
        if self.branch not in ("plus", "minus"):
            raise ValueError(f"branch must be 'plus' or 'minus', got {self.branch!r}")

    @property
    def closure_radius(self) -> float:
        return self.closure_tol if self.closure_tol is not None else 2.0 * self.step


@dataclass
class TraceResult:
    """Ordered samples of a traced isophote with per-sample diagnostics.

    All samples are spaced ``step`` apart in arclength except a final
    closure sample.  ``constraint_residual`` is Delta u' + Delta* v' for
    chart traces and Omega . t for implicit ones; ``angle_dot`` is <U, d>.
    """

    s: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    normals: np.ndarray
    angle_dot: np.ndarray
    constraint_residual: np.ndarray
    unit_speed_residual: np.ndarray
    kn: np.ndarray
    tg: np.ndarray
    termination: str
    d: np.ndarray
    phi: float
    chart: np.ndarray | None = None            # (n, 2) for parametric traces
    surface_residual: np.ndarray | None = None  # |f| for implicit traces
    grad_dot_t: np.ndarray | None = None        # grad(f) . t for implicit traces
    kg: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kg is None:
            self.kg = self._estimate_kg()

    @property
    def closed(self) -> bool:
        return self.termination == "closed"

    @property
    def n(self) -> int:
        return len(self.s)

    def _estimate_kg(self) -> np.ndarray:
        # k_g = gamma''.V with gamma'' differenced from the sampled tangents
        n = len(self.s)
        if n < 5:
            return np.full(n, np.nan)
        V = np.cross(self.normals, self.tangents)
        h = self.s[1] - self.s[0]
        uniform = n if self.termination != "closed" else n - 1
        kg = np.empty(n)
        dT = deriv_uniform(self.tangents[:uniform], h)
        kg[:uniform] = np.einsum("ij,ij->i", dT, V[:uniform])
        if uniform < n:
            ds = self.s[-1] - self.s[-2]
            dT_last = (self.tangents[-1] - self.tangents[-2]) / ds if ds > 0 else dT[-1]
            kg[-1] = dT_last @ V[-1]
        return kg


# ---------------------------------------------------------------------------
# Seed finding


def find_seed(surface, d, phi: float, guess, tol: float = 1e-12,
              max_iter: int = 100):
    """Locate a point on the level set <U, d> = cos(phi) near ``guess``.

    Parametric surfaces: 1-D bracket-and-bisect (with Newton polish) along
    the coordinate lines through the guess.  Implicit surfaces: projected
    Newton descent of <U, d> - cos(phi) in the tangent plane.  Raises
    SeedError("no isophote at this level near guess") when no crossing is
    found.
    """
    d = _unit(d)
    target = math.cos(phi)
    if isinstance(surface, ParametricSurface):
        return _find_seed_parametric(surface, d, target, guess, tol, max_iter)
    return _find_seed_implicit(surface, d, target, guess, tol, max_iter)


def _angle_value_parametric(surface, d, u, v):
    return float(unit_normal(surface.chart_jet(u, v)) @ d)


def _find_seed_parametric(surface, d, target, guess, tol, max_iter):
    u0, v0 = float(guess[0]), float(guess[1])
    if abs(_angle_value_parametric(surface, d, u0, v0) - target) <= tol:
        return (u0, v0)

    for coord in ("v", "u"):
        if coord == "v":
            lo, hi = surface.v_range
            g = lambda t: _angle_value_parametric(surface, d, u0, t) - target
            center = v0
        else:
            lo, hi = surface.u_range
            g = lambda t: _angle_value_parametric(surface, d, t, v0) - target
            center = u0
        bracket = _nearest_bracket(g, lo, hi, center)
        if bracket is None:
            continue
        t = _bisect_newton(g, *bracket, tol, max_iter)
        if t is not None:
            return (u0, t) if coord == "v" else (t, v0)
    raise SeedError("no isophote at this level near guess")


def _nearest_bracket(g, lo, hi, center, n: int = 256):
    ts = np.linspace(lo, hi, n + 1)
    vals = np.empty(n + 1)
    for i, t in enumerate(ts):
        try:
            vals[i] = g(t)
        except (RegularityError, OutOfDomainError, DarbouxError):
            vals[i] = np.nan
    best = None
    best_dist = np.inf
    for i in range(n):
        a, b = vals[i], vals[i + 1]
        if np.isnan(a) or np.isnan(b) or a * b > 0:
            continue
        mid = 0.5 * (ts[i] + ts[i + 1])
        dist = abs(mid - center)
        if dist < best_dist:
            best, best_dist = (ts[i], ts[i + 1]), dist
    return best


def _bisect_newton(g, a, b, tol, max_iter):
    ga, gb = g(a), g(b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    t = 0.5 * (a + b)
    for _ in range(max_iter):
        gt = g(t)
        if abs(gt) <= tol:
            return t
        if ga * gt < 0:
            b, gb = t, gt
        else:
            a, ga = t, gt
        # secant proposal inside the bracket, else plain bisection
        denom = gb - ga
        prop = a - ga * (b - a) / denom if denom != 0 else 0.5 * (a + b)
        t = prop if a < prop < b else 0.5 * (a + b)
    return t if abs(g(t)) <= tol else None


def _find_seed_implicit(surface, d, target, guess, tol, max_iter):
    p = project_to_implicit(surface, np.asarray(guess, dtype=float), 1e-12)
    for _ in range(max_iter):
        n_vec = surface.gradient(p)
        n_norm = float(np.linalg.norm(n_vec))
        if n_norm <= surface.eps_reg:
            raise SeedError("no isophote at this level near guess")
        nhat = n_vec / n_norm
        g = float(nhat @ d) - target
        if abs(g) <= tol:
            return p
        H = surface.hessian(p)
        grad_g = H @ d / n_norm - float(n_vec @ d) * (H @ n_vec) / n_norm**3
        gt = grad_g - float(grad_g @ nhat) * nhat
        gt2 = float(gt @ gt)
        if gt2 <= 1e-30:
            break
        step = -g / gt2 * gt
        # damp long steps; Newton is only trusted locally
        limit = 0.5 * (1.0 + float(np.linalg.norm(p)))
        step_len = float(np.linalg.norm(step))
        if step_len > limit:
            step *= limit / step_len
        p = project_to_implicit(surface, p + step, 1e-12)
    raise SeedError("no isophote at this level near guess")


# ---------------------------------------------------------------------------
# Direction fields


def isophote_direction_parametric(surface: ParametricSurface, d, u: float, v: float,
                                  branch: str = "plus",
                                  eps_sing: float = EPS_SING_DEFAULT):
    """Unit-metric-speed chart direction (u', v') of the isophote through
    (u, v): solves g_u u' + g_v v' = 0 for g = <U, d>.

    Raises SingularPointError when both g_u and g_v fall below ``eps_sing``
    (no isophotic curve with this axis exists through the point)."""
    d = np.asarray(d, dtype=float)
    jet = surface.chart_jet(u, v)
    U_u, U_v = surface.normal_derivatives(u, v)
    g_u = float(U_u @ d)
    g_v = float(U_v @ d)
    if abs(g_u) <= eps_sing and abs(g_v) <= eps_sing:
        raise SingularPointError(
            "singular point of the isophote field: no isophotic curve with "
            f"this axis/angle at (u, v)=({float(u):g}, {float(v):g})"
        )
    ff = first_form(jet)
    W = math.sqrt(ff.E * g_v**2 - 2.0 * ff.F * g_u * g_v + ff.G * g_u**2)
    du, dv = -g_v / W, g_u / W
    if branch == "minus":
        du, dv = -du, -dv
    return du, dv


def direction_scalars_parametric(surface: ParametricSurface, d, u: float, v: float,
                                 direction) -> tuple[float, float]:
    """(k_n, tau_g) of a unit chart direction at a point (point functions of
    the direction, no curve needed)."""
    jet = surface.chart_jet(u, v)
    U = unit_normal(jet)
    U_u, U_v = surface.normal_derivatives(u, v)
    du, dv = direction
    L = float(jet.sigma_uu @ U)
    M = float(jet.sigma_uv @ U)
    N = float(jet.sigma_vv @ U)
    kn = L * du * du + 2.0 * M * du * dv + N * dv * dv
    T = du * jet.sigma_u + dv * jet.sigma_v
    U_prime = du * U_u + dv * U_v
    V = np.cross(U, T)
    tg = float(-U_prime @ V)
    return kn, tg


def delta_coefficients(surface: ParametricSurface, d, u: float, v: float,
                       direction) -> tuple[float, float]:
    """Verification coefficients (Delta, Delta*) for a unit chart direction;
    along an isophote Delta u' + Delta* v' = 0.

    Delta  = sqrt(EG - F^2) k_n <sigma_u, d> + E tau_g <sigma_v, d> - F tau_g <sigma_u, d>
    Delta* = sqrt(EG - F^2) k_n <sigma_v, d> + F tau_g <sigma_v, d> - G tau_g <sigma_u, d>
    with k_n, tau_g evaluated for the supplied direction."""
    d = np.asarray(d, dtype=float)
    jet = surface.chart_jet(u, v)
    ff = first_form(jet)
    kn, tg = direction_scalars_parametric(surface, d, u, v, direction)
    su_d = float(jet.sigma_u @ d)
    sv_d = float(jet.sigma_v @ d)
    root = ff.area_element
    delta = root * kn * su_d + ff.E * tg * sv_d - ff.F * tg * su_d
    delta_star = root * kn * sv_d + ff.F * tg * sv_d - ff.G * tg * su_d
    return delta, delta_star


def isophote_direction_implicit(surface: ImplicitSurface, d, p, branch: str = "plus",
                                eps_sing: float = EPS_SING_DEFAULT,
                                on_surface_tol: float = 1e-9) -> np.ndarray:
    """Unit tangent of the isophote through p on f = 0: grad(f) x grad(g)
    normalized, g = <grad f, d>/|grad f|.

    Raises SingularPointError when the two gradients are parallel or grad(g)
    vanishes (the level set degenerates; no isophotic curve exists)."""
    d = np.asarray(d, dtype=float)
    p = np.asarray(p, dtype=float)
    f = surface.value(p)
    if abs(f) > on_surface_tol:
        raise DarbouxError(f"point is not on the surface: |f| = {abs(f):g} > {on_surface_tol:g}")
    grad = surface.gradient(p)
    n = float(np.linalg.norm(grad))
    if n <= surface.eps_reg:
        raise RegularityError(f"{surface.name}: vanishing gradient at {p!r}")
    H = surface.hessian(p)
    grad_g = H @ d / n - float(grad @ d) * (H @ grad) / n**3
    w = np.cross(grad, grad_g)
    wn = float(np.linalg.norm(w))
    if wn <= eps_sing:
        raise SingularPointError(
            f"singular isophote point at {np.round(p, 9).tolist()}: "
            "no isophotic curve with this axis/angle"
        )
    t = w / wn
    return -t if branch == "minus" else t


def direction_scalars_implicit(surface: ImplicitSurface, d, p, t) -> tuple[float, float]:
    """(k_n, tau_g) of a unit tangent t at a surface point p."""
    grad = surface.gradient(p)
    n = float(np.linalg.norm(grad))
    H = surface.hessian(p)
    t = np.asarray(t, dtype=float)
    kn = float(-t @ H @ t) / n
    U = grad / n
    U_prime = surface.normal_jacobian(p) @ t
    V = np.cross(U, t)
    tg = float(-U_prime @ V)
    return kn, tg


def omega_coefficients(surface: ImplicitSurface, d, p, t) -> np.ndarray:
    """Verification triple Omega = k_n d + tau_g (d x grad f); along an
    isophote Omega . t = 0 and t is parallel to grad(f) x Omega."""
    d = np.asarray(d, dtype=float)
    p = np.asarray(p, dtype=float)
    kn, tg = direction_scalars_implicit(surface, d, p, t)
    return kn * d + tg * np.cross(d, surface.gradient(p))


# ---------------------------------------------------------------------------
# Tracing


def _unit(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    n = float(np.linalg.norm(d))
    if n == 0.0:
        raise DarbouxError("axis must be a nonzero vector")
    return d / n


def trace_isophote(surface, d, phi: float, seed, config: TraceConfig | None = None) -> TraceResult:
    """Trace the isophote <U, d> = cos(phi) from an on-level seed.

    The seed must satisfy the level to ``config.seed_tol`` (use find_seed to
    snap a guess).  Samples are ``config.step`` apart; the trace stops on
    max length, closure (one final shortened step onto the seed's
    transversal plane), leaving the chart domain, or a singular point.
    """
    config = config or TraceConfig()
    d = _unit(d)
    if isinstance(surface, ParametricSurface):
        return _trace_parametric(surface, d, float(phi), seed, config)
    return _trace_implicit(surface, d, float(phi), seed, config)


def _closure_step(p, t, seed_p, seed_t, s_done, config):
    """Length of a final step landing on the seed's transversal plane, or
    None if not closing here."""
    if s_done < 10.0 * config.step:
        return None
    gap = seed_p - p
    if float(np.linalg.norm(gap)) > config.closure_radius:
        return None
    if float(t @ seed_t) < 0.5:
        return None
    delta = float(gap @ seed_t)
    if not 0.0 < delta <= config.step:
        return None
    return delta


def _trace_parametric(surface, d, phi, seed, config):
    target = math.cos(phi)
    u, v = surface.wrap(float(seed[0]), float(seed[1]))
    level = _angle_value_parametric(surface, d, u, v)
    if abs(level - target) > config.seed_tol:
        raise SeedError(
            f"seed is not on the isophote level: |<U,d> - cos(phi)| = "
            f"{abs(level - target):g} > {config.seed_tol:g}; use find_seed"
        )

    def direction_field(y, ref):
        du, dv = isophote_direction_parametric(surface, d, y[0], y[1],
                                               eps_sing=config.eps_sing)
        jet = surface.chart_jet(y[0], y[1])
        t3 = du * jet.sigma_u + dv * jet.sigma_v
        if ref is not None and float(t3 @ ref) < 0.0:
            return np.array([-du, -dv]), -t3
        return np.array([du, dv]), t3

    samples = {k: [] for k in ("s", "point", "chart", "tangent", "normal",
                               "angle", "constraint", "unit", "kn", "tg")}

    def record(s, y, dirpair):
        jet = surface.chart_jet(y[0], y[1])
        U = unit_normal(jet)
        du, dv = dirpair
        t3 = du * jet.sigma_u + dv * jet.sigma_v
        ff = first_form(jet)
        delta, delta_star = delta_coefficients(surface, d, y[0], y[1], (du, dv))
        kn, tg = direction_scalars_parametric(surface, d, y[0], y[1], (du, dv))
        samples["s"].append(s)
        samples["point"].append(jet.sigma)
        samples["chart"].append((y[0], y[1]))
        samples["tangent"].append(t3)
        samples["normal"].append(U)
        samples["angle"].append(float(U @ d))
        samples["constraint"].append(delta * du + delta_star * dv)
        samples["unit"].append(ff.E * du * du + 2 * ff.F * du * dv + ff.G * dv * dv - 1.0)
        samples["kn"].append(kn)
        samples["tg"].append(tg)
        return t3

    h = config.step
    y = np.array([u, v])
    termination = "length reached"
    try:
        first_dir, first_t3 = direction_field(y, None)
        if config.branch == "minus":
            first_dir, first_t3 = -first_dir, -first_t3
        seed_point = surface.chart_jet(u, v).sigma
        seed_tan = first_t3 / np.linalg.norm(first_t3)
        prev_t3 = record(0.0, y, first_dir)
        n_steps = int(math.floor(config.max_length / h + 1e-9))
        s_done = 0.0
        for _ in range(n_steps):
            y_new = _rk4_step(direction_field, y, h, prev_t3, surface.wrap)
            s_done += h
            dirpair, t3 = direction_field(y_new, prev_t3)
            prev_t3 = record(s_done, y_new, dirpair)
            y = y_new
            p_now = samples["point"][-1]
            delta = _closure_step(p_now, t3 / np.linalg.norm(t3), seed_point,
                                  seed_tan, s_done, config)
            if delta is not None:
                y_new = _rk4_step(direction_field, y, delta, prev_t3, surface.wrap)
                s_done += delta
                dirpair, _ = direction_field(y_new, prev_t3)
                record(s_done, y_new, dirpair)
                termination = "closed"
                break
    except OutOfDomainError:
        if not samples["s"]:
            raise
        termination = "left domain"
    except SingularPointError:
        if not samples["s"]:
            raise
        termination = "singular point"
    except (RegularityError, DarbouxError) as exc:
        if not samples["s"]:
            raise
        termination = f"error: {exc}"
    return TraceResult(
        s=np.array(samples["s"]),
        points=np.array(samples["point"]),
        tangents=np.array(samples["tangent"]),
        normals=np.array(samples["normal"]),
        angle_dot=np.array(samples["angle"]),
        constraint_residual=np.array(samples["constraint"]),
        unit_speed_residual=np.array(samples["unit"]),
        kn=np.array(samples["kn"]),
        tg=np.array(samples["tg"]),
        termination=termination,
        d=d,
        phi=phi,
        chart=np.array(samples["chart"]),
    )


def _rk4_step(field, y, h, ref, wrap=None):
    k1, _ = field(y, ref)
    k2, _ = field(y + 0.5 * h * k1, ref)
    k3, _ = field(y + 0.5 * h * k2, ref)
    k4, _ = field(y + h * k3, ref)
    y_new = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if wrap is not None:
        y_new = np.array(wrap(y_new[0], y_new[1]))
    return y_new


def _trace_implicit(surface, d, phi, seed, config):
    target = math.cos(phi)
    p = project_to_implicit(surface, np.asarray(seed, dtype=float), config.projection_tol)
    level = float(surface.unit_normal(p) @ d)
    if abs(level - target) > config.seed_tol:
        raise SeedError(
            f"seed is not on the isophote level: |<U,d> - cos(phi)| = "
            f"{abs(level - target):g} > {config.seed_tol:g}; use find_seed"
        )

    def direction_field(q, ref):
        t = isophote_direction_implicit(surface, d, q, eps_sing=config.eps_sing,
                                        on_surface_tol=np.inf)
        if ref is not None and float(t @ ref) < 0.0:
            return -t, -t
        return t, t

    def reproject(q):
        q = project_to_implicit(surface, q, config.projection_tol)
        if config.project_isophote:
            q = _project_two_constraints(surface, d, target, q, config.projection_tol)
        return q

    samples = {k: [] for k in ("s", "point", "tangent", "normal", "angle",
                               "constraint", "unit", "kn", "tg", "f", "gdt")}

    def record(s, q, t):
        grad = surface.gradient(q)
        U = grad / np.linalg.norm(grad)
        omega = omega_coefficients(surface, d, q, t)
        kn, tg = direction_scalars_implicit(surface, d, q, t)
        samples["s"].append(s)
        samples["point"].append(q.copy())
        samples["tangent"].append(t.copy())
        samples["normal"].append(U)
        samples["angle"].append(float(U @ d))
        samples["constraint"].append(float(omega @ t))
        samples["unit"].append(float(np.linalg.norm(t)) - 1.0)
        samples["kn"].append(kn)
        samples["tg"].append(tg)
        samples["f"].append(abs(surface.value(q)))
        samples["gdt"].append(float(grad @ t))

    h = config.step
    termination = "length reached"
    try:
        t0, _ = direction_field(p, None)
        if config.branch == "minus":
            t0 = -t0
        seed_point = p.copy()
        seed_tan = t0.copy()
        record(0.0, p, t0)
        prev_t = t0
        n_steps = int(math.floor(config.max_length / h + 1e-9))
        s_done = 0.0
        for _ in range(n_steps):
            p_new = reproject(_rk4_step(direction_field, p, h, prev_t))
            s_done += h
            t_new, _ = direction_field(p_new, prev_t)
            record(s_done, p_new, t_new)
            p, prev_t = p_new, t_new
            delta = _closure_step(p, t_new, seed_point, seed_tan, s_done, config)
            if delta is not None:
                p_new = reproject(_rk4_step(direction_field, p, delta, prev_t))
                s_done += delta
                t_new, _ = direction_field(p_new, prev_t)
                record(s_done, p_new, t_new)
                termination = "closed"
                break
    except SingularPointError:
        if not samples["s"]:
            raise
        termination = "singular point"
    except (RegularityError, DarbouxError) as exc:
        if not samples["s"]:
            raise
        termination = f"error: {exc}"
    return TraceResult(
        s=np.array(samples["s"]),
        points=np.array(samples["point"]),
        tangents=np.array(samples["tangent"]),
        normals=np.array(samples["normal"]),
        angle_dot=np.array(samples["angle"]),
        constraint_residual=np.array(samples["constraint"]),
        unit_speed_residual=np.array(samples["unit"]),
        kn=np.array(samples["kn"]),
        tg=np.array(samples["tg"]),
        termination=termination,
        d=d,
        phi=phi,
        surface_residual=np.array(samples["f"]),
        grad_dot_t=np.array(samples["gdt"]),
    )


def _project_two_constraints(surface, d, target, p, tol):
    """Newton onto {f = 0} intersected with {<U, d> = cos(phi)}."""
    for _ in range(8):
        grad = surface.gradient(p)
        n = float(np.linalg.norm(grad))
        f = surface.value(p)
        g = float(grad @ d) / n - target
        if abs(f) <= tol and abs(g) <= tol:
            return p
        H = surface.hessian(p)
        grad_g = H @ d / n - float(grad @ d) * (H @ grad) / n**3
        J = np.vstack([grad, grad_g])
        r = np.array([f, g])
        try:
            correction = J.T @ np.linalg.solve(J @ J.T, -r)
        except np.linalg.LinAlgError:
            return p
        p = p + correction
    return p
