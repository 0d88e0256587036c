"""Command-line front end: convergence tables and evaluation grids as CSV or JSON.

Exit codes: 0 success, 2 input error, 3 star violation, 4 tolerance failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields, replace

import mpmath
import numpy as np

from . import __version__
from .errors import FracstarError, StarViolation
from .evolution import CauchyProblem, continuation_sweep, solve_classical, solve_fractional, \
    solve_rescaled
from .io import load_problem, load_series
from .scale import ScaleElement, ScaleOperatorModel
from .wright import ContourConfig, limit_kernel, phi

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STAR = 3
EXIT_TOLERANCE = 4


class InputError(Exception):
    pass


@dataclass(frozen=True)
class Settings:
    """Single block of numerical defaults; ``--config`` overrides any field."""

    eval_tol: float = 1e-10
    quad_tol: float = 1e-8
    angular_tol: float = 1e-9
    nodes: int = 128
    abscissa: float = 0.5
    n_max: int = 10_000

    def contour(self, tol=None):
        return ContourConfig(abscissa=self.abscissa, nodes=self.nodes,
                             tol=self.quad_tol if tol is None else tol)


def load_settings(path):
    if not path:
        return Settings()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    known = {f.name: f.type for f in fields(Settings)}
    unknown = set(data) - set(known)
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    return replace(Settings(), **data)


# ------------------------------------------------------------------ parsing

def parse_complex(text):
    """'re' or 're,im' -> complex."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"expected 're' or 're,im', got {text!r}")


def parse_grid(text):
    """'x0:x1:nx,y0:y1:ny' -> points ordered by rows of constant imaginary part."""
    try:
        axes = [a.split(":") for a in text.split(",")]
        if len(axes) != 2 or any(len(a) != 3 for a in axes):
            raise ValueError
        (x0, x1, nx), (y0, y1, ny) = axes
        xs = np.linspace(float(x0), float(x1), int(nx))
        ys = np.linspace(float(y0), float(y1), int(ny))
    except ValueError:
        raise InputError(f"grid must look like 'x0:x1:nx,y0:y1:ny', got {text!r}") from None
    return [complex(x, y) for y in ys for x in xs]


def parse_deltas(text):
    try:
        deltas = [float(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise InputError(f"cannot parse deltas {text!r}") from None
    if not deltas or any(not 1.0 < d < 2.0 for d in deltas):
        raise InputError("deltas must lie in (1, 2)")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise InputError("deltas must be strictly decreasing toward 1")
    return deltas


# ------------------------------------------------------------------ output

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def render_table(columns, rows, meta, fmt):
    """columns: list of (name, is_complex); rows: list of dicts."""
    if fmt == "json":
        payload = {
            "meta": {k: _json_value(v) for k, v in meta.items()},
            "rows": [{name: _json_value(row.get(name)) if row.get(name) is not None else None
                      for name, _ in columns} for row in rows],
        }
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    header = []
    for name, is_complex in columns:
        header.extend([f"{name}_re", f"{name}_im"] if is_complex else [name])
    writer.writerow(header)
    for row in rows:
        line = []
        for name, is_complex in columns:
            v = row.get(name)
            if is_complex:
                line.extend(["", ""] if v is None else [_fmt(complex(v).real), _fmt(complex(v).imag)])
            else:
                line.append(_fmt(v))
        writer.writerow(line)
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _meta(command, **extra):
    meta = {"fracstar": __version__, "numpy": np.__version__, "mpmath": mpmath.__version__,
            "command": command}
    meta.update(extra)
    return meta


# ------------------------------------------------------------------ commands

def cmd_wright_eval(args, settings):
    if args.delta is None or not 1.0 <= args.delta < 2.0:
        raise InputError("--delta in [1, 2) is required")
    points = [parse_complex(z) for z in args.z or []]
    if args.grid:
        points.extend(parse_grid(args.grid))
    if not points:
        raise InputError("give evaluation points with --z or --grid")
    tol = args.tol if args.tol is not None else settings.eval_tol
    cfg = settings.contour()
    rows = []
    for z in points:
        row = {"z": z, "method": args.method}
        try:
            value, info = phi(args.delta, z, tol, cfg, args.method, full_output=True)
            row.update(value=value, method=info["method"], terms=info["terms"],
                       tail=cfg.tol if info["method"] == "integral" else 0.25 * tol)
        except FracstarError as exc:
            row["error"] = type(exc).__name__
        rows.append(row)
    columns = [("z", True), ("value", True), ("method", False), ("terms", False),
               ("tail", False), ("error", False)]
    meta = _meta("wright-eval", delta=args.delta, tol=tol, quad_tol=cfg.tol,
                 evaluator=args.method)
    _emit(render_table(columns, rows, meta, args.format), args.out)
    return EXIT_OK


def cmd_star_sum(args, settings):
    try:
        series = load_series(args.series)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse series file: {exc}") from exc
    if args.t is None:
        raise InputError("--t is required")
    t = parse_complex(args.t)
    deltas = parse_deltas(args.deltas)
    reference = parse_complex(args.reference) if args.reference is not None else None
    tol = args.tol if args.tol is not None else settings.eval_tol
    problem = CauchyProblem(ScaleOperatorModel(), ScaleElement(series.coeffs, series.rule),
                            deltas[0], series.singularities)
    try:
        sweep = continuation_sweep(problem, t, deltas, reference, tol, settings.contour(),
                                   settings.angular_tol)
    except StarViolation as exc:
        print(f"star violation: {exc}", file=sys.stderr)
        return EXIT_STAR
    rows = [{"delta": r.delta, "value": r.value, "abs_error": r.error,
             "converged": r.converged, "method": r.method} for r in sweep.rows]
    columns = [("delta", False), ("value", True), ("abs_error", False), ("converged", False),
               ("method", False)]
    meta = _meta("star-sum", t=f"{t.real!r},{t.imag!r}", tol=tol, quad_tol=settings.quad_tol,
                 evaluator="auto", monotone_decreasing=sweep.monotone_decreasing)
    _emit(render_table(columns, rows, meta, args.format), args.out)
    return EXIT_OK


def cmd_evolve(args, settings):
    try:
        problem = load_problem(args.problem)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse problem file: {exc}") from exc
    if args.delta is not None:
        problem = replace(problem, delta=args.delta)
    if args.t is None:
        raise InputError("--t is required")
    t = parse_complex(args.t)
    tol = args.tol if args.tol is not None else settings.eval_tol
    if args.mode == "classical":
        rep = solve_classical(problem, t, tol, settings.n_max)
    elif args.mode == "fractional":
        if t.imag != 0 or t.real < 0:
            raise InputError("fractional mode needs real t >= 0")
        rep = solve_fractional(problem, t.real, tol, settings.n_max)
    else:
        rep = solve_rescaled(problem, t, tol, settings.n_max, settings.contour())
    values = np.atleast_1d(np.asarray(rep.value, dtype=complex))
    rows = [{"component": i, "value": complex(v), "terms_used": rep.terms_used,
             "tail_estimate": float(rep.tail_estimate), "converged": bool(rep.converged),
             "method": rep.method} for i, v in enumerate(values)]
    columns = [("component", False), ("value", True), ("terms_used", False),
               ("tail_estimate", False), ("converged", False), ("method", False)]
    meta = _meta("evolve", mode=args.mode, delta=problem.delta, t=f"{t.real!r},{t.imag!r}",
                 tol=tol, evaluator=rep.method)
    _emit(render_table(columns, rows, meta, args.format), args.out)
    return EXIT_OK


def cmd_kernel_check(args, settings):
    if not args.z:
        raise InputError("give points with --z")
    points = [parse_complex(z) for z in args.z]
    tol = args.tol if args.tol is not None else settings.quad_tol
    cfg = settings.contour(tol)
    rows = []
    status = EXIT_OK
    for z in points:
        closed = 1.0 / (1.0 - z) if z != 1 else None
        row = {"z": z, "closed_form": closed}
        try:
            value = limit_kernel(z, cfg)
            err = abs(value - closed)
            row.update(kernel=value, abs_error=err)
            if not err <= tol and status == EXIT_OK:
                status = EXIT_TOLERANCE
        except ArithmeticError as exc:
            # TailError / SlowConvergence: the tolerance cannot be met
            row["error"] = type(exc).__name__
            if status == EXIT_OK:
                status = EXIT_TOLERANCE
        except FracstarError as exc:
            row["error"] = type(exc).__name__
            status = EXIT_INPUT
        rows.append(row)
    columns = [("z", True), ("kernel", True), ("closed_form", True), ("abs_error", False),
               ("error", False)]
    meta = _meta("kernel-check", tol=tol, evaluator="integral", nodes=cfg.nodes)
    _emit(render_table(columns, rows, meta, args.format), args.out)
    return status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracstar",
        description="Fractional approximation of evolution equations and their continuations.")
    parser.add_argument("--version", action="version", version=f"fracstar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, help="evaluation tolerance")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument("--config", help="JSON file overriding numerical defaults")

    p = sub.add_parser("wright-eval", help="evaluate phi_delta on points or a grid")
    p.add_argument("--delta", type=float)
    p.add_argument("--z", action="append", help="point 're' or 're,im' (repeatable)")
    p.add_argument("--grid", help="rectangular grid 'x0:x1:nx,y0:y1:ny'")
    p.add_argument("--method", choices=("auto", "series", "integral"), default="auto")
    common(p)
    p.set_defaults(func=cmd_wright_eval)

    p = sub.add_parser("star-sum", help="delta sweep of the rescaled series at t")
    p.add_argument("--series", required=True, help="PowerSeries JSON file")
    p.add_argument("--t")
    p.add_argument("--deltas", default="1.2,1.1,1.05")
    p.add_argument("--reference", help="closed-form value 're' or 're,im'")
    common(p)
    p.set_defaults(func=cmd_star_sum)

    p = sub.add_parser("evolve", help="solve a Cauchy problem at t")
    p.add_argument("--problem", required=True, help="CauchyProblem JSON file")
    p.add_argument("--t")
    p.add_argument("--mode", choices=("classical", "fractional", "rescaled"),
                   default="rescaled")
    p.add_argument("--delta", type=float, help="override the problem's delta")
    common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("kernel-check", help="compare the limit kernel with 1/(1-z)")
    p.add_argument("--z", action="append", help="point 're' or 're,im' (repeatable)")
    common(p)
    p.set_defaults(func=cmd_kernel_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args.config)
        return args.func(args, settings)
    except (InputError, FracstarError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
