"""Command-line front end.

Subcommands: frames, classify, trace, trace-implicit, seed-find, catalog.
Domain failures (degenerate input, singular points, seeds off-level) exit
with code 2 and the module error verbatim on stderr; usage errors exit 1.
Angles are taken in degrees on the command line and converted to radians
internally.  Output formats are documented bit-exactly in docs/formats.md;
floats are rendered with %.17g so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import classify as _classify
from . import frames as _frames
from . import surface as _surface
from . import trace as _trace
from .errors import DarbouxError

TRACE_COLUMNS = ("s,x,y,z,u,v,tx,ty,tz,kg,kn,tg,angle_dot,"
                 "res_constraint,res_unit_speed")
FRAMES_COLUMNS = "s,x,y,z,tx,ty,tz,vx,vy,vz,ux,uy,uz,kg,kn,tg"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _fmt(x: float) -> str:
    return "%.17g" % x


def _parse_floats(text: str, n: int, label: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != n:
        raise DarbouxError(f"{label} needs {n} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise DarbouxError(f"bad number in {label}: {text!r}") from None


def _axis(text: str) -> np.ndarray:
    d = np.array(_parse_floats(text, 3, "--axis"))
    n = float(np.linalg.norm(d))
    if n == 0.0:
        raise DarbouxError("--axis must be nonzero")
    return d / n


def _angle_rad(deg: float) -> float:
    if not 0.0 <= deg <= 180.0:
        raise DarbouxError(f"--angle must be in [0, 180] degrees, got {deg!r}")
    return math.radians(deg)


def _eps_sing_default() -> float:
    env = os.environ.get("DARBOUX_EPS_SING")
    return float(env) if env else _trace.EPS_SING_DEFAULT


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Curve specs: param:u=<expr in s>;v=<expr in s>[;s=<lo>,<hi>]
#              space:x=..;y=..;z=..[;s=<lo>,<hi>]


def build_curve(surface, spec: str, resample_n: int = 512):
    if ":" not in spec:
        raise DarbouxError(f"curve spec needs a 'param:' or 'space:' prefix: {spec!r}")
    kind, rest = spec.split(":", 1)
    fields = _surface._split_fields(rest)
    s_range = _surface._parse_range(fields["s"]) if "s" in fields else (0.0, 2.0 * math.pi)
    if kind == "param":
        for key in ("u", "v"):
            if key not in fields:
                raise DarbouxError(f"param curve spec missing {key}=...: {spec!r}")
        if not isinstance(surface, _surface.ParametricSurface):
            raise DarbouxError("param: curves need a parametric surface")
        path = _frames.ChartPath.from_expressions(fields["u"], fields["v"], s_range)
        return _frames.unit_speed_chart_curve(surface, path, n=resample_n)
    if kind == "space":
        for key in ("x", "y", "z"):
            if key not in fields:
                raise DarbouxError(f"space curve spec missing {key}=...: {spec!r}")
        if not isinstance(surface, _surface.ImplicitSurface):
            raise DarbouxError("space: curves need an implicit surface")
        raw = _frames.ParamCurve.from_expressions(
            fields["x"], fields["y"], fields["z"], s_range)
        curve = _frames.resample_unit_speed(raw, n=resample_n)
        return _frames.CurveOnSurface(surface, space_curve=curve)
    raise DarbouxError(f"unknown curve spec kind {kind!r}")


# ---------------------------------------------------------------------------
# Output writers


def trace_csv(result: _trace.TraceResult) -> str:
    lines = [TRACE_COLUMNS]
    for i in range(result.n):
        u, v = ("", "") if result.chart is None else (
            _fmt(result.chart[i, 0]), _fmt(result.chart[i, 1]))
        p = result.points[i]
        t = result.tangents[i]
        lines.append(",".join([
            _fmt(result.s[i]), _fmt(p[0]), _fmt(p[1]), _fmt(p[2]), u, v,
            _fmt(t[0]), _fmt(t[1]), _fmt(t[2]),
            _fmt(result.kg[i]), _fmt(result.kn[i]), _fmt(result.tg[i]),
            _fmt(result.angle_dot[i]), _fmt(result.constraint_residual[i]),
            _fmt(result.unit_speed_residual[i]),
        ]))
    return "\n".join(lines) + "\n"


def trace_json(result: _trace.TraceResult, surface_name: str) -> str:
    payload = {
        "kind": "trace",
        "surface": surface_name,
        "axis": [result.d[0], result.d[1], result.d[2]],
        "angle_deg": math.degrees(result.phi),
        "termination": result.termination,
        "columns": TRACE_COLUMNS.split(","),
        "samples": [
            [
                result.s[i],
                *result.points[i].tolist(),
                *( result.chart[i].tolist() if result.chart is not None else [None, None]),
                *result.tangents[i].tolist(),
                result.kg[i], result.kn[i], result.tg[i],
                result.angle_dot[i], result.constraint_residual[i],
                result.unit_speed_residual[i],
            ]
            for i in range(result.n)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def trace_obj(result: _trace.TraceResult) -> str:
    lines = [f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}" for p in result.points]
    indices = list(range(1, result.n + 1))
    if result.closed:
        indices.append(1)
    lines.append("l " + " ".join(str(i) for i in indices))
    return "\n".join(lines) + "\n"


def frames_csv(c, grid) -> str:
    data = _frames.sample_frames(c, grid)
    lines = [FRAMES_COLUMNS]
    for i in range(data.n):
        row = [data.s[i], *data.gamma[i], *data.T[i], *data.V[i], *data.U[i],
               data.kg[i], data.kn[i], data.tg[i]]
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def frames_json(c, grid) -> str:
    data = _frames.sample_frames(c, grid)
    payload = {
        "kind": "frames",
        "columns": FRAMES_COLUMNS.split(","),
        "samples": [
            [data.s[i], *data.gamma[i].tolist(), *data.T[i].tolist(),
             *data.V[i].tolist(), *data.U[i].tolist(),
             data.kg[i], data.kn[i], data.tg[i]]
            for i in range(data.n)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_trace(args, implicit: bool) -> int:
    surface = _surface.parse_surface_spec(args.surface, implicit=implicit)
    d = _axis(args.axis)
    phi = _angle_rad(args.angle)
    config = _trace.TraceConfig(
        step=args.step,
        max_length=args.length,
        branch=args.branch,
        closure_tol=args.closure_tol,
        eps_sing=args.eps_sing,
        projection_tol=args.project_tol,
        project_isophote=args.project_isophote,
    )
    guess = _parse_floats(args.seed, 3 if implicit else 2, "--seed")

    def run_one(phi_k: float, out_path: str | None):
        # the CLI treats --seed as a guess: snap it onto the exact level
        target = math.cos(phi_k)
        if implicit:
            p = _trace.project_to_implicit(surface, np.asarray(guess, dtype=float),
                                           config.projection_tol)
            level = float(surface.unit_normal(p) @ d)
            seed = p if abs(level - target) <= config.seed_tol else _trace.find_seed(
                surface, d, phi_k, guess)
        else:
            level = _trace._angle_value_parametric(surface, d, guess[0], guess[1])
            seed = guess if abs(level - target) <= config.seed_tol else _trace.find_seed(
                surface, d, phi_k, guess)
        result = _trace.trace_isophote(surface, d, phi_k, seed, config)
        if args.format == "csv":
            _write(out_path, trace_csv(result))
        elif args.format == "json":
            _write(out_path, trace_json(result, surface.name))
        else:
            _write(out_path, trace_obj(result))
        return result

    if args.family:
        lo, hi, count = args.family.split(":")
        angles = np.linspace(float(lo), float(hi), int(count))
        if args.out is None:
            raise DarbouxError("--family requires --out (one file per angle)")
        root, ext = os.path.splitext(args.out)
        jobs = [(math.radians(a), f"{root}_deg{a:g}{ext}") for a in angles]
        with ThreadPoolExecutor() as pool:
            futures = [pool.submit(run_one, phi_k, path) for phi_k, path in jobs]
            for fut in futures:
                fut.result()
        return 0

    run_one(phi, args.out)
    return 0


def _cmd_seed_find(args) -> int:
    surface = _surface.parse_surface_spec(args.surface, implicit=args.implicit)
    d = _axis(args.axis)
    phi = _angle_rad(args.angle)
    n = 3 if isinstance(surface, _surface.ImplicitSurface) else 2
    guess = _parse_floats(args.guess, n, "--guess")
    seed = _trace.find_seed(surface, d, phi, guess)
    text = " ".join(_fmt(x) for x in np.atleast_1d(np.asarray(seed, dtype=float))) + "\n"
    _write(args.out, text)
    return 0


def _cmd_classify(args) -> int:
    implicit = args.curve.startswith("space:")
    surface = _surface.parse_surface_spec(args.surface, implicit=implicit)
    curve = build_curve(surface, args.curve)
    s0, s1 = curve.s_range
    grid = _frames.uniform_grid(s0, s1, args.samples)
    tols = _classify.Tolerances(constancy=args.tol)
    report = _classify.classify_report(curve, grid, tols=tols, c_const=args.c_const)
    _write(args.out, json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_frames(args) -> int:
    implicit = args.curve.startswith("space:")
    surface = _surface.parse_surface_spec(args.surface, implicit=implicit)
    curve = build_curve(surface, args.curve)
    s0, s1 = curve.s_range
    grid = _frames.uniform_grid(s0, s1, args.samples)
    if args.format == "json":
        _write(args.out, frames_json(curve, grid))
    else:
        _write(args.out, frames_csv(curve, grid))
    return 0


def _cmd_catalog(args) -> int:
    lines = ["builtin surfaces (use as builtin:<name>?<params>):"]
    for name, (parametric_ctor, implicit_ctor) in _surface.CATALOG.items():
        s = parametric_ctor()
        forms = "parametric" + (", implicit" if implicit_ctor else "")
        lines.append(
            f"  {name:14s} {forms:22s} u in [{s.u_range[0]:g}, {s.u_range[1]:g}]"
            f"{' (periodic)' if s.periodic_u else ''}, "
            f"v in [{s.v_range[0]:g}, {s.v_range[1]:g}]"
            f"{' (periodic)' if s.periodic_v else ''}"
        )
    _write(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Argument wiring


def _add_common_output(p):
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def _add_trace_args(p, implicit: bool):
    p.add_argument("--surface", required=True, help="surface spec string")
    p.add_argument("--axis", required=True, help="axis d as x,y,z (normalized)")
    p.add_argument("--angle", type=float, required=True, help="angle in degrees [0, 180]")
    p.add_argument("--seed", required=True,
                   help="seed guess: u,v (parametric) or x,y,z (implicit); snapped to the level")
    p.add_argument("--step", type=float, default=1e-3, help="arclength step (default 1e-3)")
    p.add_argument("--length", type=float, default=10.0, help="max arclength (default 10)")
    p.add_argument("--branch", choices=("plus", "minus"), default="plus")
    p.add_argument("--closure-tol", type=float, default=None,
                   help="closure detection radius (default 2*step)")
    p.add_argument("--eps-sing", type=float, default=_eps_sing_default(),
                   help="singularity threshold (env DARBOUX_EPS_SING overrides default)")
    p.add_argument("--project-tol", type=float, default=1e-12,
                   help="implicit projection tolerance")
    p.add_argument("--project-isophote", action="store_true",
                   help="also Newton-project onto the isophote level each step (implicit)")
    p.add_argument("--family", default=None, metavar="A:B:N",
                   help="sweep N angles from A to B degrees, traced concurrently")
    p.add_argument("--format", choices=("csv", "json", "obj"), default="csv")
    _add_common_output(p)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="darboux",
                     description="Darboux-frame invariants, curve classification, "
                                 "and isophote tracing on surfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frames", parents=[], help="Darboux frames along a curve")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True, help="param:u=..;v=..[;s=lo,hi] or space:x=..;y=..;z=..")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common_output(p)

    p = sub.add_parser("classify", help="classification report (JSON)")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--c-const", type=float, default=1.0,
                   help="free constant in the position coefficients (nonzero)")
    p.add_argument("--tol", type=float, default=None,
                   help="constancy tolerance (default 1e-6 analytic, 1e-3 sampled)")
    _add_common_output(p)

    p = sub.add_parser("trace", help="trace an isophote on a parametric surface")
    _add_trace_args(p, implicit=False)

    p = sub.add_parser("trace-implicit", help="trace an isophote on an implicit surface")
    _add_trace_args(p, implicit=True)

    p = sub.add_parser("seed-find", help="locate a point on the isophote level set")
    p.add_argument("--surface", required=True)
    p.add_argument("--axis", required=True)
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--guess", required=True, help="u,v (parametric) or x,y,z (implicit)")
    p.add_argument("--implicit", action="store_true",
                   help="resolve a builtin surface to its implicit form")
    _add_common_output(p)

    p = sub.add_parser("catalog", help="list builtin surfaces")
    _add_common_output(p)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "trace":
            return _cmd_trace(args, implicit=False)
        if args.command == "trace-implicit":
            return _cmd_trace(args, implicit=True)
        if args.command == "seed-find":
            return _cmd_seed_find(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "frames":
            return _cmd_frames(args)
        if args.command == "catalog":
            return _cmd_catalog(args)
        parser.error(f"unknown command {args.command!r}")
    except DarbouxError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
