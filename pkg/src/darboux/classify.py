"""Characterization functions for surface curves and their constancy verdicts.

The scalar functions computed here decide, per sample grid, whether a curve
is a relatively normal-slant helix (the Darboux V field keeps a constant
angle to some fixed axis), an isophotic curve (the surface normal U does),
a slant helix, or a rectifying curve; recover the axis and angle from the
frame samples; and test the position-vector identities that hold when the
curve lies in the moving plane span{T, U} or span{T, V}.

Plane labels: "TU" refers to the span{T, U} family (V-slant measure mu_v),
"TV" to the span{T, V} family (isophote measure mu_u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import (
    DarbouxError,
    DegenerateFrameError,
    InsufficientSamplesError,
)
from .frames import (
    EPS_KAPPA_DEFAULT,
    CurveOnSurface,
    FrameData,
    deriv_uniform,
    frenet,
    sample_frames,
)

__all__ = [
    "CharacterizationSeries",
    "ConstancyVerdict",
    "AxisEstimate",
    "Tolerances",
    "ClassificationReport",
    "mu_v_series",
    "mu_u_series",
    "slant_helix_series",
    "slant_series_from_scalars",
    "theorem_functions",
    "position_decomposition",
    "position_theorem_residual",
    "plane_ode_residual",
    "is_constant",
    "recover_axis",
    "rectifying_check",
    "rectifying_from_scalars",
    "classify_report",
]

EPS_PAIR_DEFAULT = 1e-9


@dataclass
class CharacterizationSeries:
    """Scalar function of arclength with a defined-mask."""

    s: np.ndarray
    values: np.ndarray
    mask: np.ndarray  # True where the defining preconditions held
    name: str

    def defined_values(self) -> np.ndarray:
        return self.values[self.mask]

    @property
    def n_defined(self) -> int:
        return int(self.mask.sum())


@dataclass
class ConstancyVerdict:
    is_constant: bool
    mean: float
    max_abs_dev: float
    tol: float

    def as_dict(self):
        return {
            "is_constant": self.is_constant,
            "mean": self.mean,
            "max_abs_dev": self.max_abs_dev,
            "tol": self.tol,
        }


@dataclass
class AxisEstimate:
    d: np.ndarray
    angle: float  # radians in [0, pi]
    variance: float
    ambiguous: bool = False
    candidates: tuple | None = None

    def as_dict(self):
        out = {
            "d": list(self.d),
            "angle_rad": self.angle,
            "angle_deg": math.degrees(self.angle),
            "projection_variance": self.variance,
            "ambiguous": self.ambiguous,
        }
        if self.candidates is not None:
            out["candidates"] = [list(c) for c in self.candidates]
        return out


@dataclass
class Tolerances:
    """Report tolerances; None fields are filled from the data scale."""

    constancy: float | None = None  # 1e-6 analytic input, 1e-3 sampled input
    plane: float | None = None      # 1e-8 * (1 + max |gamma|)
    flag: float = 1e-8              # special-type flags, relative to frame scale
    eps_pair: float = EPS_PAIR_DEFAULT
    eps_kappa: float = EPS_KAPPA_DEFAULT
    axis_gap: float = 1e-12

    def resolved_constancy(self, analytic: bool) -> float:
        if self.constancy is not None:
            return self.constancy
        return 1e-6 if analytic else 1e-3


def _as_data(c, grid, eps_kappa=EPS_KAPPA_DEFAULT) -> FrameData:
    if isinstance(c, FrameData):
        return c
    return sample_frames(c, np.asarray(grid, dtype=float), eps_kappa=eps_kappa)


def _edge_mask(data: FrameData) -> np.ndarray:
    # sampled-polyline input: stencil edges are excluded from statistics
    mask = np.ones(data.n, dtype=bool)
    if not data.analytic and data.n > 4:
        mask[:2] = mask[-2:] = False
    return mask


# ---------------------------------------------------------------------------
# Constancy measures


def mu_v_series(c, grid=None, eps_pair: float = EPS_PAIR_DEFAULT) -> CharacterizationSeries:
    """V-slant measure: constant iff the curve is a relatively normal-slant
    helix (requires (tau_g, k_g) != (0, 0) pointwise)."""
    data = _as_data(c, grid)
    return _pair_measure(data, data.kg, data.dkg, data.kn, eps_pair, "mu_v")


def mu_u_series(c, grid=None, eps_pair: float = EPS_PAIR_DEFAULT) -> CharacterizationSeries:
    """Isophote measure: constant iff the curve is isophotic (requires
    (tau_g, k_n) != (0, 0) pointwise)."""
    data = _as_data(c, grid)
    return _pair_measure(data, data.kn, data.dkn, data.kg, eps_pair, "mu_u")


def _pair_measure(data, a, da, other, eps_pair, name):
    # (a tg' - tg a' - other (a^2 + tg^2)) / (a^2 + tg^2)^{3/2}
    tg, dtg = data.tg, data.dtg
    q = a * a + tg * tg
    mask = (q > eps_pair * eps_pair) & _edge_mask(data)
    if not mask.any():
        raise DegenerateFrameError(
            f"{name}: degenerate pair everywhere on the grid "
            f"(a^2 + tau_g^2 <= {eps_pair:g}^2)"
        )
    values = np.full(data.n, np.nan)
    values[mask] = (a * dtg - tg * da - other * q)[mask] / np.power(q[mask], 1.5)
    return CharacterizationSeries(data.s, values, mask, name)


def slant_series_from_scalars(grid, kappa, tau, dratio=None,
                              name: str = "slant_helix") -> CharacterizationSeries:
    """kappa^2 / (kappa^2 + tau^2)^{3/2} * (tau/kappa)' from scalar samples.

    ``dratio`` overrides the central-difference derivative of tau/kappa
    (useful when an analytic derivative is known)."""
    grid = np.asarray(grid, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    tau = np.asarray(tau, dtype=float)
    ratio = tau / kappa
    if dratio is None:
        dratio = deriv_uniform(ratio, grid[1] - grid[0])
    values = kappa**2 / np.power(kappa**2 + tau**2, 1.5) * dratio
    return CharacterizationSeries(grid, values, np.ones(len(grid), dtype=bool), name)


def slant_helix_series(c, grid, eps_kappa: float = EPS_KAPPA_DEFAULT) -> CharacterizationSeries:
    """Slant-helix measure along a curve; constant iff the principal normal
    keeps a constant angle with a fixed direction."""
    grid = np.asarray(grid, dtype=float)
    kappa, tau = _kappa_tau(c, grid, eps_kappa)
    series = slant_series_from_scalars(grid, kappa, tau)
    if isinstance(c, CurveOnSurface) and not c.analytic:
        series.mask[:2] = series.mask[-2:] = False
    return series


def _kappa_tau(c, grid, eps_kappa):
    kappa = np.empty(len(grid))
    tau = np.empty(len(grid))
    for i, s in enumerate(grid):
        fr = frenet(c, s, eps_kappa=eps_kappa)
        kappa[i], tau[i] = fr.kappa, fr.tau
    return kappa, tau


# ---------------------------------------------------------------------------
# Exponential-integral characterizations and plane coefficients


@dataclass
class TheoremFunctions:
    """The two plane-family characterization functions and the position
    coefficients, for a chosen free constant c."""

    slant_criterion: CharacterizationSeries | None
    isophote_criterion: CharacterizationSeries | None
    lambda1: CharacterizationSeries | None
    lambda2: CharacterizationSeries | None
    mu1: CharacterizationSeries | None
    mu2: CharacterizationSeries | None
    c_const: float


def _cumulative_integral(y, s):
    return np.concatenate([[0.0], cumulative_simpson(y, x=s)])


def theorem_functions(c, grid=None, c_const: float = 1.0, family: str = "both",
                      eps: float = 1e-9) -> TheoremFunctions:
    """Characterization functions for the span{T,U} ("TU") and span{T,V}
    ("TV") families, with cumulative integrals started at the grid's first
    sample and free constant ``c_const`` (verdict-level results are invariant
    to both choices).

    Raises DegenerateFrameError naming the family whose divisor (k_g for TU,
    k_n for TV) falls below ``eps`` anywhere on the grid.
    """
    if c_const == 0.0:
        raise ValueError("free constant c must be nonzero")
    if family not in ("both", "TU", "TV"):
        raise ValueError(f"unknown family {family!r}")
    data = _as_data(c, grid)
    s = data.s
    ones = np.ones(data.n, dtype=bool) & _edge_mask(data)
    out = TheoremFunctions(None, None, None, None, None, None, c_const)

    if family in ("both", "TU"):
        if np.min(np.abs(data.kg)) <= eps:
            raise DegenerateFrameError(
                f"TU family (relatively normal-slant): |k_g| <= {eps:g} on the grid"
            )
        integral = _cumulative_integral(data.tg * data.kn / data.kg, s)
        q = data.kg**2 + data.tg**2
        out.slant_criterion = CharacterizationSeries(
            s, data.kg**2 / np.power(q, 1.5) * np.exp(integral), ones.copy(),
            "slant_criterion",
        )
        out.lambda1 = CharacterizationSeries(
            s, c_const * (data.tg / data.kg) * np.exp(-integral), ones.copy(), "lambda1")
        out.lambda2 = CharacterizationSeries(
            s, c_const * np.exp(-integral), ones.copy(), "lambda2")

    if family in ("both", "TV"):
        if np.min(np.abs(data.kn)) <= eps:
            raise DegenerateFrameError(
                f"TV family (isophotic): |k_n| <= {eps:g} on the grid"
            )
        integral = _cumulative_integral(data.tg * data.kg / data.kn, s)
        q = data.kn**2 + data.tg**2
        out.isophote_criterion = CharacterizationSeries(
            s, data.kn**2 / np.power(q, 1.5) * np.exp(-integral), ones.copy(),
            "isophote_criterion",
        )
        out.mu1 = CharacterizationSeries(
            s, -c_const * (data.tg / data.kn) * np.exp(integral), ones.copy(), "mu1")
        out.mu2 = CharacterizationSeries(
            s, c_const * np.exp(integral), ones.copy(), "mu2")

    return out


# ---------------------------------------------------------------------------
# Position-vector identities


@dataclass
class PositionDecomposition:
    dot_T: CharacterizationSeries
    dot_V: CharacterizationSeries
    dot_U: CharacterizationSeries
    in_plane_TU: bool
    in_plane_TV: bool
    plane_tol: float


def position_decomposition(c, grid=None, plane_tol: float | None = None) -> PositionDecomposition:
    """Dot products of the position vector with the Darboux frame, plus
    moving-plane membership flags.

    span{T,U} membership requires max |<gamma,V>| below tolerance; span{T,V}
    requires max |<gamma,U>| below it.  Default tolerance is
    1e-8 * (1 + max |gamma|)."""
    data = _as_data(c, grid)
    dt = np.einsum("ij,ij->i", data.gamma, data.T)
    dv = np.einsum("ij,ij->i", data.gamma, data.V)
    du = np.einsum("ij,ij->i", data.gamma, data.U)
    if plane_tol is None:
        plane_tol = 1e-8 * (1.0 + float(np.max(np.linalg.norm(data.gamma, axis=1))))
    mask = np.ones(data.n, dtype=bool)
    return PositionDecomposition(
        CharacterizationSeries(data.s, dt, mask.copy(), "gamma_dot_T"),
        CharacterizationSeries(data.s, dv, mask.copy(), "gamma_dot_V"),
        CharacterizationSeries(data.s, du, mask.copy(), "gamma_dot_U"),
        bool(np.max(np.abs(dv)) <= plane_tol),
        bool(np.max(np.abs(du)) <= plane_tol),
        plane_tol,
    )


def position_theorem_residual(c, grid=None, which: str = "TU",
                              eps_pair: float = EPS_PAIR_DEFAULT) -> CharacterizationSeries:
    """Residual of the closed-form position identity per sample.

    which="TU": |gamma - (k_g tau_g) q^{-3/2} T - k_g^2 q^{-3/2} U| with
    q = k_g^2 + tau_g^2 (holds for relatively normal-slant helices lying in
    span{T,U}).  which="TV": |gamma - k_n^2 q^{-3/2} V + (k_n tau_g) q^{-3/2} T|
    with q = k_n^2 + tau_g^2."""
    data = _as_data(c, grid)
    if which == "TU":
        a = data.kg
    elif which == "TV":
        a = data.kn
    else:
        raise ValueError(f"which must be 'TU' or 'TV', got {which!r}")
    mask = (a * a + data.tg**2 > eps_pair * eps_pair) & _edge_mask(data)
    if not mask.any():
        raise DegenerateFrameError(f"position identity {which}: degenerate pair everywhere")
    am, tgm = a[mask], data.tg[mask]
    q = np.power(am * am + tgm * tgm, 1.5)
    if which == "TU":
        claimed = ((am * tgm / q)[:, None] * data.T[mask]
                   + (am * am / q)[:, None] * data.U[mask])
    else:
        claimed = ((am * am / q)[:, None] * data.V[mask]
                   - (am * tgm / q)[:, None] * data.T[mask])
    res = np.full(data.n, np.nan)
    res[mask] = np.linalg.norm(data.gamma[mask] - claimed, axis=1)
    return CharacterizationSeries(data.s, res, mask, f"position_residual_{which}")


def plane_ode_residual(c, grid=None, c_const: float = 1.0, which: str = "TU",
                       eps: float = 1e-9) -> CharacterizationSeries:
    """Residual of the scalar relation tying the curvature ratio to the
    exponential integral, for a supplied nonzero constant c.

    which="TU": |(tg/kg)' - ((tg/kg)^2 + 1) kn - (1/c) exp(I)| with
    I = integral of tg kn / kg.  which="TV": |(tg/kn)' - ((tg/kn)^2 + 1) kg
    + (1/c) exp(-J)| with J = integral of tg kg / kn."""
    if c_const == 0.0:
        raise ValueError("constant c must be nonzero")
    data = _as_data(c, grid)
    if which == "TU":
        den, dden, other = data.kg, data.dkg, data.kn
        sign = 1.0
    elif which == "TV":
        den, dden, other = data.kn, data.dkn, data.kg
        sign = -1.0
    else:
        raise ValueError(f"which must be 'TU' or 'TV', got {which!r}")
    if np.min(np.abs(den)) <= eps:
        raise DegenerateFrameError(f"plane relation {which}: divisor below {eps:g} on the grid")
    ratio = data.tg / den
    dratio = (data.dtg * den - dden * data.tg) / den**2
    integrand = data.tg * other / den
    integral = _cumulative_integral(sign * integrand, data.s)
    lhs = dratio - (ratio**2 + 1.0) * other
    rhs = sign * (1.0 / c_const) * np.exp(integral)
    mask = _edge_mask(data)
    return CharacterizationSeries(data.s, np.abs(lhs - rhs), mask, f"plane_ode_residual_{which}")


# ---------------------------------------------------------------------------
# Verdicts


def is_constant(series: CharacterizationSeries, tol: float) -> ConstancyVerdict:
    """Scale-aware constancy: max |w - mean| <= tol * (1 + |mean|)."""
    vals = series.defined_values()
    if len(vals) < 8:
        raise InsufficientSamplesError(
            f"{series.name}: {len(vals)} unmasked samples < 8"
        )
    mean = float(np.mean(vals))
    dev = float(np.max(np.abs(vals - mean)))
    return ConstancyVerdict(dev <= tol * (1.0 + abs(mean)), mean, dev, tol)


def recover_axis(vectors: np.ndarray, axis_gap: float = 1e-12) -> AxisEstimate:
    """Axis d minimizing the variance of projections <w_i, d>, as the
    eigenvector of the smallest eigenvalue of the sample covariance; the
    angle is arccos of the (clamped) mean projection.

    Flags ambiguity when the two smallest covariance eigenvalues are within
    ``axis_gap`` (both candidate axes reported)."""
    w = np.asarray(vectors, dtype=float)
    if w.ndim != 2 or w.shape[1] != 3 or len(w) < 3:
        raise DarbouxError("recover_axis needs at least 3 vectors of shape (n, 3)")
    mean = w.mean(axis=0)
    centered = w - mean
    cov = centered.T @ centered / len(w)
    eigvals, eigvecs = np.linalg.eigh(cov)  # ascending
    ambiguous = bool(eigvals[1] - eigvals[0] < axis_gap)
    mean_norm = float(np.linalg.norm(mean))
    if ambiguous and eigvals[1] < axis_gap and mean_norm > 0.0:
        # fully degenerate (e.g. a constant series): every axis has zero
        # projection variance; take the one maximizing the mean projection
        d = mean / mean_norm
        angle = math.acos(min(mean_norm, 1.0))
        return AxisEstimate(d, angle, float(eigvals[0]), True, None)
    d = eigvecs[:, 0]
    proj = float(mean @ d)
    if proj < 0.0:
        d = -d
        proj = -proj
    angle = math.acos(min(max(proj, -1.0), 1.0))
    candidates = None
    if ambiguous:
        d2 = eigvecs[:, 1]
        if mean @ d2 < 0:
            d2 = -d2
        candidates = (d.copy(), d2)
    return AxisEstimate(d, float(angle), float(eigvals[0]), ambiguous, candidates)


@dataclass
class RectifyingCheck:
    slope: float
    intercept: float
    fit_residual: float
    is_rectifying: bool
    gamma_dot_N: CharacterizationSeries | None = None


def rectifying_from_scalars(grid, kappa, tau, tol: float = 1e-6,
                            eps: float = 1e-9) -> RectifyingCheck:
    """Least-squares line through (s, tau/kappa); rectifying iff the fit is
    tight and both coefficients are nonzero."""
    grid = np.asarray(grid, dtype=float)
    ratio = np.asarray(tau, dtype=float) / np.asarray(kappa, dtype=float)
    slope, intercept = np.polyfit(grid, ratio, 1)
    resid = float(np.max(np.abs(ratio - (slope * grid + intercept))))
    verdict = resid <= tol and abs(slope) > eps and abs(intercept) > eps
    return RectifyingCheck(float(slope), float(intercept), resid, bool(verdict))


def rectifying_check(c, grid, tol: float = 1e-6, eps: float = 1e-9,
                     eps_kappa: float = EPS_KAPPA_DEFAULT) -> RectifyingCheck:
    """Rectifying test for a curve: <gamma, N> residual series plus the
    linear fit of tau/kappa."""
    grid = np.asarray(grid, dtype=float)
    kappa = np.empty(len(grid))
    tau = np.empty(len(grid))
    dot_n = np.empty(len(grid))
    for i, s in enumerate(grid):
        fr = frenet(c, s, eps_kappa=eps_kappa)
        kappa[i], tau[i] = fr.kappa, fr.tau
        g = _position(c, s)
        dot_n[i] = g @ fr.N
    check = rectifying_from_scalars(grid, kappa, tau, tol=tol, eps=eps)
    check.gamma_dot_N = CharacterizationSeries(
        grid, dot_n, np.ones(len(grid), dtype=bool), "gamma_dot_N")
    return check


def _position(c, s):
    if isinstance(c, CurveOnSurface):
        return c.gamma_jet(s)[0]
    return c.gamma(s)


# ---------------------------------------------------------------------------
# Aggregate report


@dataclass
class ClassificationReport:
    series: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    axes: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    orientation: str = ""

    def as_dict(self) -> dict:
        return {
            "series": self.series,
            "verdicts": self.verdicts,
            "flags": self.flags,
            "axes": self.axes,
            "tolerances": self.tolerances,
            "orientation": self.orientation,
        }


def _series_payload(series: CharacterizationSeries) -> dict:
    vals = [None if not m else v for v, m in zip(series.values.tolist(), series.mask.tolist())]
    return {"s": series.s.tolist(), "values": vals, "mask": series.mask.tolist()}


def classify_report(c: CurveOnSurface, grid, tols: Tolerances | None = None,
                    c_const: float = 1.0) -> ClassificationReport:
    """Full classification: constancy verdicts, special-type flags, plane
    memberships, axis estimates, and corollary cross-checks.

    Sub-computations whose preconditions fail are recorded under
    ``verdicts[name]["error"]`` instead of aborting the report."""
    tols = tols or Tolerances()
    grid = np.asarray(grid, dtype=float)
    data = sample_frames(c, grid, eps_kappa=tols.eps_kappa)
    tol_const = tols.resolved_constancy(data.analytic)
    report = ClassificationReport()
    report.orientation = (
        "parametric: U = sigma_u x sigma_v normalized"
        if c.kind == "parametric"
        else "implicit: U = grad f / |grad f|"
    )

    scale = 1.0 + float(np.max(data.kappa))
    flag_tol = tols.flag * scale
    report.flags = {
        "geodesic": _flag(np.max(np.abs(data.kg)), flag_tol),
        "asymptotic": _flag(np.max(np.abs(data.kn)), flag_tol),
        "line_of_curvature": _flag(np.max(np.abs(data.tg)), flag_tol),
    }

    for key in ("kg", "kn", "tg"):
        report.series[key] = _series_payload(
            CharacterizationSeries(data.s, getattr(data, key), np.ones(data.n, bool), key))

    def attempt(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DarbouxError as exc:
            report.verdicts[name] = {"error": str(exc)}
            return None

    # constancy measures
    mu_v = attempt("rel_normal_slant", mu_v_series, data, eps_pair=tols.eps_pair)
    if mu_v is not None:
        report.series["mu_v"] = _series_payload(mu_v)
        report.verdicts["rel_normal_slant"] = _verdict(mu_v, tol_const)
    mu_u = attempt("isophotic", mu_u_series, data, eps_pair=tols.eps_pair)
    if mu_u is not None:
        report.series["mu_u"] = _series_payload(mu_u)
        report.verdicts["isophotic"] = _verdict(mu_u, tol_const)

    # exponential-integral characterizations, one family at a time
    tu = attempt("rel_normal_slant_position", theorem_functions, data,
                 c_const=c_const, family="TU")
    if tu is not None:
        report.series["slant_criterion"] = _series_payload(tu.slant_criterion)
        report.series["lambda1"] = _series_payload(tu.lambda1)
        report.series["lambda2"] = _series_payload(tu.lambda2)
        report.verdicts["rel_normal_slant_position"] = _verdict(tu.slant_criterion, tol_const)
    tv = attempt("isophotic_position", theorem_functions, data,
                 c_const=c_const, family="TV")
    if tv is not None:
        report.series["isophote_criterion"] = _series_payload(tv.isophote_criterion)
        report.series["mu1"] = _series_payload(tv.mu1)
        report.series["mu2"] = _series_payload(tv.mu2)
        report.verdicts["isophotic_position"] = _verdict(tv.isophote_criterion, tol_const)

    # position decomposition and plane membership
    decomp = position_decomposition(data, plane_tol=tols.plane)
    for series in (decomp.dot_T, decomp.dot_V, decomp.dot_U):
        report.series[series.name] = _series_payload(series)
    report.flags["in_plane_TU"] = _flag(
        float(np.max(np.abs(decomp.dot_V.values))), decomp.plane_tol)
    report.flags["in_plane_TV"] = _flag(
        float(np.max(np.abs(decomp.dot_U.values))), decomp.plane_tol)

    for which in ("TU", "TV"):
        res = attempt(f"position_residual_{which}", position_theorem_residual,
                      data, which=which, eps_pair=tols.eps_pair)
        if res is not None:
            report.series[res.name] = _series_payload(res)

    # Frenet-level checks
    frenet_ok = bool(data.frenet_mask.all())
    if frenet_ok:
        slant = attempt("slant_helix", slant_series_from_scalars, data.s, data.kappa, data.tau)
        if slant is not None:
            if not data.analytic:
                slant.mask[:2] = slant.mask[-2:] = False
            report.series["slant_helix"] = _series_payload(slant)
            report.verdicts["slant_helix"] = _verdict(slant, tol_const)
        rect = attempt("rectifying", rectifying_from_scalars, data.s, data.kappa, data.tau,
                       tol=tol_const)
        if rect is not None:
            report.verdicts["rectifying"] = {
                "is_rectifying": rect.is_rectifying,
                "slope": rect.slope,
                "intercept": rect.intercept,
                "fit_residual": rect.fit_residual,
                "tol": tol_const,
            }
    else:
        msg = "Frenet frame undefined somewhere on the grid (kappa below threshold)"
        report.verdicts["slant_helix"] = {"error": msg}
        report.verdicts["rectifying"] = {"error": msg}

    # axis estimates from the V and U series
    report.axes["V_axis"] = recover_axis(data.V, axis_gap=tols.axis_gap).as_dict()
    report.axes["U_axis"] = recover_axis(data.U, axis_gap=tols.axis_gap).as_dict()

    report.verdicts["cross_checks"] = _cross_checks(
        report, data, decomp, tol_const, frenet_ok)

    report.tolerances = {
        "constancy": tol_const,
        "plane": decomp.plane_tol,
        "flag": flag_tol,
        "eps_pair": tols.eps_pair,
        "eps_kappa": tols.eps_kappa,
        "analytic_input": data.analytic,
    }
    return report


def _flag(max_abs: float, tol: float) -> dict:
    return {"value": bool(max_abs <= tol), "max_abs": float(max_abs), "tol": float(tol)}


def _verdict(series: CharacterizationSeries, tol: float) -> dict:
    try:
        return is_constant(series, tol).as_dict()
    except InsufficientSamplesError as exc:
        return {"error": str(exc)}


def _constant_dict(values, tol):
    mean = float(np.mean(values))
    dev = float(np.max(np.abs(values - mean)))
    return {"is_constant": bool(dev <= tol * (1.0 + abs(mean))), "mean": mean,
            "max_abs_dev": dev, "tol": tol}


def _cross_checks(report, data: FrameData, decomp, tol_const, frenet_ok) -> list:
    """Corollary-style consistency notes, evaluated only when the combined
    hypotheses hold."""
    checks = []

    def verdict_true(name):
        v = report.verdicts.get(name)
        return bool(v and v.get("is_constant"))

    loc = report.flags["line_of_curvature"]["value"]
    geo = report.flags["geodesic"]["value"]
    asym = report.flags["asymptotic"]["value"]

    item = {"name": "line_of_curvature_TU_slant_implies_kg_constant",
            "hypotheses_met": bool(loc and decomp.in_plane_TU and verdict_true("rel_normal_slant"))}
    if item["hypotheses_met"]:
        item["detail"] = _constant_dict(data.kg, tol_const)
        item["consistent"] = item["detail"]["is_constant"]
    checks.append(item)

    item = {"name": "line_of_curvature_TV_isophotic_implies_kn_constant",
            "hypotheses_met": bool(loc and decomp.in_plane_TV and verdict_true("isophotic"))}
    if item["hypotheses_met"]:
        item["detail"] = _constant_dict(data.kn, tol_const)
        item["consistent"] = item["detail"]["is_constant"]
    checks.append(item)

    if frenet_ok:
        shape = data.kappa**2 / np.power(data.kappa**2 + data.tau**2, 1.5)
        item = {"name": "asymptotic_TU_slant_iff_frenet_shape_constant",
                "hypotheses_met": bool(asym and decomp.in_plane_TU
                                       and "rel_normal_slant" in report.verdicts
                                       and "error" not in report.verdicts["rel_normal_slant"])}
        if item["hypotheses_met"]:
            item["detail"] = _constant_dict(shape, tol_const)
            item["consistent"] = (item["detail"]["is_constant"]
                                  == verdict_true("rel_normal_slant"))
        checks.append(item)

        item = {"name": "geodesic_TV_isophotic_iff_frenet_shape_constant",
                "hypotheses_met": bool(geo and decomp.in_plane_TV
                                       and "isophotic" in report.verdicts
                                       and "error" not in report.verdicts["isophotic"])}
        if item["hypotheses_met"]:
            item["detail"] = _constant_dict(shape, tol_const)
            item["consistent"] = (item["detail"]["is_constant"] == verdict_true("isophotic"))
        checks.append(item)

    return checks
