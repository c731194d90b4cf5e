"""movebound command line: reference tables, verification suites, grids, tracing.

Exit codes: 0 success / all checks pass, 1 failing check or numerical error,
2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import boundary as bd
from .defaults import DEFAULTS_VERSION, RNG_SEED, TABLE_B, TOLERANCES
from .errors import (ComplexBoundaryError, DegenerateFamilyError, MoveboundError,
                     NewtonDivergenceError)
from .fd_oracle import cross_check
from .heatsol import AiryQuadratic, Convolution, LinearClosedForm, PearceyIntegral, heat_residual
from .phi_ode import PhiSpec, SecondOrder, cubic_phi, solve_phi
from .report import VerificationReport

CASES = ("linear", "airy", "cubic", "pearcey", "theorem2")


class ConfigError(Exception):
    pass


# -- config ------------------------------------------------------------------


def read_config(path) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, value = (s.strip() for s in line.split("=", 1))
                out[key.lstrip("-").replace("-", "_")] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return out


def thread_count() -> int:
    raw = os.environ.get("MOVEBOUND_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"MOVEBOUND_THREADS must be an integer, got {raw!r}") from None


def _tolerances(args) -> dict:
    tol = dict(TOLERANCES)
    for item in args.tol or []:
        if "=" in item:
            key, value = item.split("=", 1)
            if key not in tol:
                raise ConfigError(f"unknown tolerance {key!r}")
            tol[key] = float(value)
        else:
            v = float(item)
            tol = {k: v for k in tol}
    return tol


# -- output ------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(args, text: str):
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _snapshot(args) -> dict:
    skip = {"func", "config", "out"}
    snap = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    snap["defaults_version"] = DEFAULTS_VERSION
    return snap


def _table_output(args, header, rows, extra=None) -> str:
    if args.format == "json":
        doc = {"config": _snapshot(args), "columns": header,
               "rows": [[float(v) if not isinstance(v, (int, np.integer)) else int(v)
                         for v in r] for r in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return _csv_text(header, rows)


# -- solution factory --------------------------------------------------------


def _require_positive(name, v):
    if not v > 0:
        raise ConfigError(f"{name} must be positive (got {v})")


def _solution(args):
    case = args.case
    if case == "linear":
        return LinearClosedForm(args.b)
    if case == "airy":
        if args.root < 1:
            raise ConfigError("--root must be >= 1")
        return AiryQuadratic(args.root)
    if case == "cubic":
        if args.b2 == 0:
            raise ConfigError("--b2 must be nonzero")
        return Convolution(cubic_phi(args.b2))
    if case == "pearcey":
        return PearceyIntegral()
    if case == "theorem2":
        return _theorem2_solution(args)
    raise ConfigError(f"unknown case {case!r}")


def _theorem2_solution(args):
    fam = SecondOrder(args.d0, args.d1, args.c0, args.c1, args.c2)
    for half in (40.0, 20.0, 10.0):
        try:
            return Convolution(solve_phi(PhiSpec(fam, (1.0, 0.0)), (-half, half)))
        except MoveboundError:
            continue
    raise MoveboundError("phi for the theorem2 coefficients overflows even on [-10, 10]")


def _boundary(args, sol):
    case = args.case
    if case == "linear":
        return bd.LinearBoundary(args.b)
    if case == "airy":
        return bd.QuadraticBoundary(sol.root)
    if case == "cubic":
        return bd.CubicBoundary(args.b2)
    if case == "pearcey":
        return bd.boundary_rayleigh(sol, args.zero, max(args.t_max, 1e-3))
    raise ConfigError(f"no boundary for case {case!r}")


# -- commands ------------------------------------------------------------------


def cmd_table(args) -> int:
    if args.b2 == 0:
        raise ConfigError("--b2 must be nonzero")
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    _require_positive("--t-step", args.t_step)
    sol = Convolution(cubic_phi(args.b2))
    rows = []
    for i in range(1, args.steps + 1):
        t = i * args.t_step
        x = bd.boundary_cubic(args.b2, t) + args.shift
        rows.append((i, t, x, sol.value(t, x)))
    _emit(args, _table_output(args, ["i", "t", "x", "nu"], rows))
    return 0


def _grid_axes(args, allow_t0=False):
    if args.nt < 1 or args.nx < 1:
        raise ConfigError("--nt and --nx must be >= 1")
    if args.t_max < args.t_min or args.x_max < args.x_min:
        raise ConfigError("ranges must satisfy min <= max")
    if not (args.t_min > 0 or (allow_t0 and args.t_min >= 0)):
        raise ConfigError("--t-min must be positive for this case")
    ts = np.linspace(args.t_min, args.t_max, args.nt)
    xs = np.linspace(args.x_min, args.x_max, args.nx)
    return ts, xs


def cmd_grid(args) -> int:
    sol = _solution(args)
    ts, xs = _grid_axes(args, allow_t0=args.case in ("airy", "pearcey"))

    def row_block(t):
        p = sol.partials(float(t), xs, 1)
        return [(t, x, v, d) for x, v, d in zip(xs, p[0], p[1])]

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        blocks = list(pool.map(row_block, ts))
    rows = [r for b in blocks for r in b]
    _emit(args, _table_output(args, ["t", "x", "nu", "nu_x"], rows))
    return 0


def _default_seed(args, sol, bnd_t0):
    if args.x_seed is not None:
        return args.x_seed
    case = args.case
    if case == "linear":
        return -args.b * bnd_t0
    if case == "airy":
        return sol.root - 0.25 * bnd_t0 ** 2
    if case == "cubic":
        return bd.boundary_cubic(args.b2, bnd_t0)
    if case == "pearcey":
        return bd.pearcey_zero(sol, args.zero)
    raise ConfigError("trace needs --x-seed for this case")


def cmd_trace(args) -> int:
    sol = _solution(args)
    if args.nt < 2:
        raise ConfigError("--nt must be >= 2 for tracing")
    ns = argparse.Namespace(**{**vars(args), "nx": 1, "x_min": 0.0, "x_max": 0.0})
    ts, _ = _grid_axes(ns, allow_t0=args.case in ("airy", "pearcey"))
    seed = _default_seed(args, sol, ts[0])
    code = 0
    try:
        rows = bd.boundary_trace(sol, ts, seed).rows
    except NewtonDivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        rows, code = exc.partial, 1
    _emit(args, _table_output(args, ["t", "f", "df"], rows))
    return code


def _heat_grid(sol, t_lo=0.05, t_hi=1.0, x_lim=3.0, n=5):
    res = []
    for t in np.linspace(t_lo, t_hi, n):
        res.extend(np.atleast_1d(heat_residual(sol, float(t), np.linspace(-x_lim, x_lim, n))))
    return res


def verify_case(args) -> VerificationReport:
    tol = _tolerances(args)
    case = args.case
    rep = VerificationReport(config={**_snapshot(args), "tolerances": tol})
    if case == "theorem2":
        bnd = bd.Theorem2Boundary(args.d0, args.d1, args.c0, args.c1, args.c2, args.C)
        rep.extend(bd.check_theorem2_family(
            bnd, np.linspace(args.t_min, args.t_max, 200), tol["theorem2_ode"]))
        sol = _solution(args)
        rng = np.random.default_rng(RNG_SEED)
        samples = np.c_[rng.uniform(0.05, 0.3, 10), rng.uniform(-1.0, 1.0, 10)]
        rep.extend(bd.check_master_identity(sol, sol.phi.spec, samples, tol["master_identity"]))
        return rep

    sol = _solution(args)
    # phi for b2 is a rescaling of the b2 = -1 solution by alpha = |b2|^(-1/5); scale the samples alike
    alpha = abs(args.b2) ** -0.2 if case == "cubic" else 1.0
    rep.add("heat_residual", _heat_grid(sol, 0.05 * alpha ** 2, alpha ** 2, 3.0 * alpha),
            tol["heat_residual"])
    if case == "pearcey":
        t_lo = 0.0
    else:
        t_lo = max(args.t_min, 0.05) if case == "cubic" else args.t_min
    t_lo = max(t_lo, 0.0)
    if case in ("linear", "cubic"):
        t_lo = max(t_lo, 1e-3)
    ts = np.linspace(t_lo, args.t_max, 20)
    bnd = _boundary(args, sol)

    if case == "cubic":
        steps = np.arange(1, 11) * 0.05
        zeros = [sol.value(t, bd.boundary_cubic(args.b2, t)) for t in steps]
        rep.add("table_zero", zeros, tol["table_zero"], note="nu(i/20, f(i/20)), i=1..10")
        if args.b2 == -1:
            vals = [sol.value(t, t ** 3 / 8 + 2) for t in steps]
            rep.add("table_values", np.array(vals) - np.array(TABLE_B), tol["table_values"],
                    note="nu(i/20, (i/20)^3/8 + 2) against the reference table")
        rep.extend(bd.check_cubic_boundary_ode(args.b2, np.linspace(0, 2, 41),
                                               tol=tol["cubic_boundary_ode"]))
        rng = np.random.default_rng(RNG_SEED)
        samples = np.c_[rng.uniform(0.05, 1.0, 10) * alpha ** 2,
                        rng.uniform(-3.0, 3.0, 10) * alpha]
        rep.extend(bd.check_master_identity(sol, sol.phi.spec, samples, tol["master_identity"]))

    if case == "pearcey":
        xs = np.linspace(-10, 10, 201)
        rep.add("pearcey_even", np.array(sol.value(0.5, xs)) - np.array(sol.value(0.5, -xs)),
                tol["pearcey_even"])
        scale = float(np.max(np.abs(sol.value(0.0, np.linspace(-6, 6, 241)))))
        rep.extend(bd.check_boundary_vanishing(sol, bnd, ts, tol["boundary_vanishing"], scale))
        rep.add("rayleigh_ode", bd.rayleigh_ode_residual(bnd, ts[1:-1]), tol["rayleigh_ode"])
    else:
        rep.extend(bd.check_boundary_vanishing(sol, bnd, ts, tol["table_zero"]))
    rep.extend(bd.check_remark1(sol, bnd, ts, tol["remark1"]))

    if case in ("linear", "airy", "cubic"):
        key = f"trace_{case}"
        tr = bd.boundary_trace(sol, ts, float(bnd.f(ts[0])))
        rep.add(key, tr.x - bnd.f(tr.t), tol[key])

    if args.fd and case in ("linear", "cubic"):
        t0, t1 = (0.1, 0.5) if case == "linear" else (0.1, 0.4)
        width = 8.0 if case == "linear" else None
        err, peak, _ = cross_check(sol, bnd, t0, t1, args.nx, args.nt, width)
        rep.add(f"fd_{case}", err, tol[f"fd_{case}"],
                note=f"max|nu(t1)|={peak:.6g}, relative error={err / peak:.3g}")
    return rep


def cmd_verify(args) -> int:
    rep = verify_case(args)
    text = rep.to_json() + "\n" if args.format == "json" else _csv_text(
        ["check", "max_residual", "tolerance", "passed", "samples"],
        [(e.name, e.max_residual, e.tolerance, int(e.passed), e.samples) for e in rep.entries])
    _emit(args, text)
    return 0 if rep.passed else 1


# -- parser --------------------------------------------------------------------


def _common(p, fmt_default):
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)


def _case_params(p):
    p.add_argument("--case", choices=CASES, default="cubic")
    p.add_argument("--b", type=float, default=1.0, help="linear boundary slope")
    p.add_argument("--b2", type=float, default=-1.0, help="cubic coefficient")
    p.add_argument("--root", type=int, default=1, help="Airy zero index")
    p.add_argument("--zero", type=int, default=1, help="Pearcey zero index")
    for name in ("d0", "d1", "c0", "c1", "c2", "C"):
        p.add_argument(f"--{name}", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="movebound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="nu(i*dt, f(i*dt) + shift) for the cubic boundary")
    _common(p, "csv")
    p.add_argument("--b2", type=float, default=-1.0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--t-step", type=float, default=0.05)
    p.add_argument("--shift", type=float, default=0.0)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the residual suite for one case")
    _common(p, "json")
    _case_params(p)
    p.add_argument("--t-min", type=float, default=0.05)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--fd", action="store_true", help="include the finite-difference cross-check")
    p.add_argument("--nx", type=int, default=400)
    p.add_argument("--nt", type=int, default=400)
    p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                   help="override a tolerance (repeatable); a bare number overrides all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("grid", help="CSV of (t, x, nu, nu_x) on a rectangular grid")
    _common(p, "csv")
    _case_params(p)
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=-3.0)
    p.add_argument("--x-max", type=float, default=3.0)
    p.add_argument("--nt", type=int, default=10)
    p.add_argument("--nx", type=int, default=61)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("trace", help="follow a zero of nu(t, .) in t")
    _common(p, "csv")
    _case_params(p)
    p.add_argument("--t-min", type=float, default=0.05)
    p.add_argument("--t-max", type=float, default=0.5)
    p.add_argument("--nt", type=int, default=46)
    p.add_argument("--x-seed", type=float, default=None)
    p.set_defaults(func=cmd_trace)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        conf = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(conf) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        actions = {a.dest: a for a in sub._actions}
        for key, value in conf.items():
            act = actions[key]
            if isinstance(act, argparse._StoreTrueAction):
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ConfigError(f"{key} expects a boolean, got {value!r}")
                conf[key] = value.lower() in ("true", "1", "yes")
            elif isinstance(act, argparse._AppendAction):
                conf[key] = [v.strip() for v in value.split(",") if v.strip()]
        sub.set_defaults(**conf)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ConfigError, DegenerateFamilyError, ComplexBoundaryError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except MoveboundError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
