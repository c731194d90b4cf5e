"""Boundary curves f(t) and the identities linking them to nu.

Along a curve where nu(t, f(t)) = 0, differentiating in t and using
nu_t = nu_xx / 2 gives

    f' nu' + nu''/2 = 0
    f'' nu' + f' (f' nu'' + nu''') + nu''''/4 = 0

(primes on nu are x-derivatives).  These are checked by ``check_remark1``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .errors import (ComplexBoundaryError, DegenerateFamilyError,
                     NewtonDivergenceError, RootNotBracketedError, StepFailureError)
from .heatsol import Convolution, HeatSolution, PearceyIntegral
from .phi_ode import PhiSpec, SecondOrder, ThirdOrderCubic
from .report import VerificationReport

# -- boundary types ----------------------------------------------------------


class Boundary:
    kind = "abstract"

    def f(self, t):
        raise NotImplementedError

    def df(self, t):
        raise NotImplementedError

    def d2f(self, t):
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


class LinearBoundary(Boundary):
    """f(t) = -b t."""

    kind = "linear"

    def __init__(self, b):
        self.b = float(b)

    def f(self, t):
        return -self.b * np.asarray(t, dtype=float)

    def df(self, t):
        return -self.b + 0.0 * np.asarray(t, dtype=float)

    def d2f(self, t):
        return 0.0 * np.asarray(t, dtype=float)

    def describe(self):
        return {"kind": self.kind, "b": self.b}


class QuadraticBoundary(Boundary):
    """f(t) = xi - t^2/4."""

    kind = "quadratic"

    def __init__(self, xi):
        self.xi = float(xi)

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return self.xi - 0.25 * t * t

    def df(self, t):
        return -0.5 * np.asarray(t, dtype=float)

    def d2f(self, t):
        return -0.5 + 0.0 * np.asarray(t, dtype=float)

    def describe(self):
        return {"kind": self.kind, "xi": self.xi}


class CubicBoundary(Boundary):
    """f(t) = -(b2/8) t^3."""

    kind = "cubic"

    def __init__(self, b2):
        if b2 == 0:
            raise ValueError("b2 must be nonzero")
        self.b2 = float(b2)

    @property
    def delta(self):
        return -self.b2 / 8.0

    def f(self, t):
        return self.delta * np.asarray(t, dtype=float) ** 3

    def df(self, t):
        return 3.0 * self.delta * np.asarray(t, dtype=float) ** 2

    def d2f(self, t):
        return 6.0 * self.delta * np.asarray(t, dtype=float)

    def describe(self):
        return {"kind": self.kind, "b2": self.b2}


class Theorem2Boundary(Boundary):
    """f(t) = (-d0 d1 - 2 c1 - 2 c2 d0 t + c1 d1 t)/(d1^2 + 4 c2) + C sqrt(-1 + d1 t + c2 t^2)."""

    kind = "theorem2"

    def __init__(self, d0=0.0, d1=0.0, c0=0.0, c1=0.0, c2=0.0, C=0.0):
        self.d0, self.d1, self.c0, self.c1, self.c2, self.C = map(float, (d0, d1, c0, c1, c2, C))
        self.denom = self.d1 ** 2 + 4.0 * self.c2
        if self.denom == 0.0:
            raise DegenerateFamilyError(
                f"d1^2 + 4 c2 = 0 for d1={self.d1}, c2={self.c2}; the boundary family is undefined")

    def radicand(self, t):
        t = np.asarray(t, dtype=float)
        return -1.0 + self.d1 * t + self.c2 * t * t

    def _root(self, t):
        r = self.radicand(t)
        if self.C != 0.0 and np.any(r < 0):
            bad = np.atleast_1d(np.asarray(t))[np.atleast_1d(r) < 0]
            raise ComplexBoundaryError(
                f"-1 + d1 t + c2 t^2 < 0 at t={bad[0]:.6g} with C={self.C}")
        return np.sqrt(np.maximum(r, 0.0))

    def f(self, t):
        t = np.asarray(t, dtype=float)
        lin = (-self.d0 * self.d1 - 2 * self.c1
               + (-2 * self.c2 * self.d0 + self.c1 * self.d1) * t) / self.denom
        return lin + self.C * self._root(t)

    def df(self, t):
        t = np.asarray(t, dtype=float)
        slope = (-2 * self.c2 * self.d0 + self.c1 * self.d1) / self.denom
        if self.C == 0.0:
            return slope + 0.0 * t
        return slope + self.C * (self.d1 + 2 * self.c2 * t) / (2 * self._root(t))

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        if self.C == 0.0:
            return 0.0 * t
        s = self._root(t)
        r1 = self.d1 + 2 * self.c2 * t
        return self.C * (2 * self.c2 / (2 * s) - r1 * r1 / (4 * s ** 3))

    def real_interval(self, t_lo, t_hi, n=2001):
        """Sub-range of [t_lo, t_hi] where the radicand is non-negative (sampled)."""
        ts = np.linspace(t_lo, t_hi, n)
        ok = ts[self.radicand(ts) >= 0]
        if self.C == 0.0:
            return (t_lo, t_hi)
        return (float(ok.min()), float(ok.max())) if ok.size else None

    def describe(self):
        return {"kind": self.kind, "d0": self.d0, "d1": self.d1, "c0": self.c0,
                "c1": self.c1, "c2": self.c2, "C": self.C}


class RayleighBoundary(Boundary):
    """Solution of f'' = 2 f'^3 - t f'/2 - f/4 with dense output on [0, t_max]."""

    kind = "rayleigh"

    def __init__(self, f0, df0, t_max, rtol=1e-13, atol=1e-15):
        self.f0, self.df0, self.t_max = float(f0), float(df0), float(t_max)
        sol = solve_ivp(_rayleigh_rhs, (0.0, self.t_max), [self.f0, self.df0],
                        method="DOP853", rtol=rtol, atol=atol, dense_output=True)
        if sol.status != 0:
            raise StepFailureError(sol.message)
        self._sol = sol.sol

    def f(self, t):
        return self._sol(t)[0]

    def df(self, t):
        return self._sol(t)[1]

    def d2f(self, t):
        f, fp = self._sol(t)
        return _rayleigh_rhs(np.asarray(t), (f, fp))[1]

    def describe(self):
        return {"kind": self.kind, "f0": self.f0, "df0": self.df0, "t_max": self.t_max}


def _rayleigh_rhs(t, u):
    f, fp = u
    return [fp, 2.0 * fp ** 3 - 0.5 * t * fp - 0.25 * f]


class TracedBoundary(Boundary):
    """Zero set followed by Newton continuation; f'' from the Hermite spline."""

    kind = "traced"

    def __init__(self, rows):
        rows = sorted(rows)
        self.rows = rows
        self.t = np.array([r[0] for r in rows])
        self.x = np.array([r[1] for r in rows])
        self.fp = np.array([r[2] for r in rows])
        self._spline = CubicHermiteSpline(self.t, self.x, self.fp) if len(rows) > 1 else None

    def f(self, t):
        return self._spline(t)

    def df(self, t):
        return self._spline(t, 1)

    def d2f(self, t):
        return self._spline(t, 2)

    def describe(self):
        return {"kind": self.kind, "points": len(self.rows)}


# -- closed-form boundary operations ------------------------------------------


def boundary_theorem2(d0, d1, c0, c1, c2, C, t):
    """Value of the rational-plus-square-root boundary family at t."""
    val = Theorem2Boundary(d0, d1, c0, c1, c2, C).f(t)
    return float(val) if np.ndim(val) == 0 else val


def theorem2_ode_residual(bnd: Theorem2Boundary, t):
    """Normalized residual of -2 f' (1 - d1 t - c2 t^2) = d0 + c1 t + (d1 + 2 c2 t) f."""
    t = np.asarray(t, dtype=float)
    f, fp = bnd.f(t), bnd.df(t)
    lhs = -2.0 * fp * (1.0 - bnd.d1 * t - bnd.c2 * t * t)
    a = bnd.d0 + bnd.c1 * t
    b = (bnd.d1 + 2.0 * bnd.c2 * t) * f
    scale = np.maximum.reduce([np.abs(lhs), np.abs(a), np.abs(b)]) + 1.0
    return np.abs(lhs - a - b) / scale


def check_theorem2_family(bnd: Theorem2Boundary, t_grid, tol=None) -> VerificationReport:
    from .defaults import TOLERANCES
    tol = TOLERANCES["theorem2_ode"] if tol is None else tol
    t_grid = np.asarray(t_grid, dtype=float)
    real = t_grid[bnd.radicand(t_grid) > 0] if bnd.C != 0.0 else t_grid
    rep = VerificationReport(config={"boundary": bnd.describe()})
    interval = (float(real.min()), float(real.max())) if real.size else None
    rep.add("theorem2_boundary_ode", theorem2_ode_residual(bnd, real) if real.size else [math.nan],
            tol, note=f"real t-interval {interval}")
    return rep


def boundary_cubic(b2, t):
    """-(b2/8) t^3."""
    val = CubicBoundary(b2).f(t)
    return float(val) if np.ndim(val) == 0 else val


def cubic_boundary_ode_residual(b2, t, delta=None):
    """Residual of the boundary ODE for the cubic family at f = delta t^3.

    -4 f'' + 2 f' [4 f'^2 + 4 b2 t^2 f' - 2 b2 t f + b2^2 t^4] - b2 f [2 b2 t^3 + f] - 3 b2 t

    Expanding gives -3 t (8 delta + b2) + t^6 delta (216 delta^2 + 59 b2 delta + 4 b2^2),
    which vanishes identically exactly when delta = -b2/8.
    """
    if b2 == 0:
        raise ValueError("b2 must be nonzero")
    delta = -b2 / 8.0 if delta is None else delta
    t = np.asarray(t, dtype=float)
    f, fp, fpp = delta * t ** 3, 3 * delta * t ** 2, 6 * delta * t
    bracket = 4 * fp ** 2 + 4 * b2 * t ** 2 * fp - 2 * b2 * t * f + b2 ** 2 * t ** 4
    return -4 * fpp + 2 * fp * bracket - b2 * f * (2 * b2 * t ** 3 + f) - 3 * b2 * t


def check_cubic_boundary_ode(b2, t_grid, delta=None, tol=None) -> VerificationReport:
    """Residual / (1 + t^6) of the cubic boundary ODE on ``t_grid``."""
    from .defaults import TOLERANCES
    tol = TOLERANCES["cubic_boundary_ode"] if tol is None else tol
    t = np.asarray(t_grid, dtype=float)
    res = cubic_boundary_ode_residual(b2, t, delta) / (1.0 + t ** 6)
    d = -b2 / 8.0 if delta is None else delta
    rep = VerificationReport(config={"b2": b2, "delta": d})
    rep.add("cubic_boundary_ode", res, tol)
    return rep


# -- Rayleigh / Pearcey --------------------------------------------------------


def _positive_zeros(func, window, step):
    lo, hi = window
    xs = np.arange(max(lo, step), hi + step / 2, step)
    v = func(xs)
    idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    return xs, idx


def pearcey_zero(sol: PearceyIntegral, zero_index: int = 1, window=(0.0, 12.0),
                 step: float = 0.01) -> float:
    """zero_index-th positive zero of x -> nu(0, x)."""
    if zero_index < 1:
        raise ValueError("zero_index must be >= 1")

    def g(x):
        return sol.value(0.0, x)

    xs, idx = _positive_zeros(g, window, step)
    if len(idx) < zero_index:
        raise RootNotBracketedError(
            f"nu(0, .) has {len(idx)} positive zeros in {window}, asked for {zero_index}")
    i = idx[zero_index - 1]
    return brentq(g, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)


def boundary_rayleigh(sol: PearceyIntegral, zero_index: int = 1,
                      t_max: float = 0.5) -> RayleighBoundary:
    """Integrate the Rayleigh-type boundary ODE from a zero of the Pearcey integral.

    f(0) is the chosen zero of nu(0, .); f'(0) = -nu''/(2 nu') there.
    """
    x0 = pearcey_zero(sol, zero_index)
    p = sol.partials(0.0, x0, 2)
    return RayleighBoundary(x0, -0.5 * float(p[2]) / float(p[1]), t_max)


def rayleigh_ode_residual(bnd: RayleighBoundary, t, h: float = 2e-3):
    """|f'' - (2 f'^3 - t f'/2 - f/4)| with f'' from Richardson-extrapolated differences of f'."""
    t = np.asarray(t, dtype=float)

    def cd(step):
        return (bnd.df(t + step) - bnd.df(t - step)) / (2 * step)

    fpp = (4 * cd(h / 2) - cd(h)) / 3
    rhs = _rayleigh_rhs(t, (bnd.f(t), bnd.df(t)))[1]
    return np.abs(fpp - rhs)


# -- tracing -------------------------------------------------------------------


class _NewtonFail(Exception):
    pass


def _newton(sol, t, guess, max_jump, tol=1e-13, max_iter=50):
    x = float(guess)
    dx = math.inf
    for _ in range(max_iter):
        p = sol.partials(t, x, 1)
        v, d = float(p[0]), float(p[1])
        if d == 0.0 or not math.isfinite(v) or not math.isfinite(d):
            raise _NewtonFail
        dx = v / d
        x -= dx
        if abs(x - guess) > max_jump:
            raise _NewtonFail
        if abs(dx) <= tol * (1.0 + abs(x)):
            return x
    if abs(dx) <= 1e-10 * (1.0 + abs(x)):
        return x
    raise _NewtonFail


def _slope(sol, t, x):
    p = sol.partials(t, x, 2)
    return -0.5 * float(p[2]) / float(p[1])


def boundary_trace(sol: HeatSolution, t_grid, x_seed: float, min_step: float = 1e-5,
                   seed_jump: float = 0.5) -> TracedBoundary:
    """Follow a zero of nu(t, .) across ``t_grid`` by predictor-corrector Newton.

    The predictor uses f' = -nu_t / nu' = -nu''/(2 nu'); on a failed corrector
    the t-step is halved down to ``min_step``.
    """
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    try:
        x = _newton(sol, t_grid[0], x_seed, seed_jump)
    except _NewtonFail:
        raise NewtonDivergenceError(f"no zero found near x={x_seed} at t={t_grid[0]}",
                                    last_good_t=None) from None
    fp = _slope(sol, t_grid[0], x)
    rows = [(t_grid[0], x, fp)]
    t_cur = t_grid[0]
    for t_next in t_grid[1:]:
        step = t_next - t_cur
        while t_cur < t_next:
            h = min(step, t_next - t_cur)
            guess = x + fp * h
            try:
                x_new = _newton(sol, t_cur + h, guess, max_jump=0.1 + 10 * h * (1 + abs(fp)))
            except _NewtonFail:
                step = h / 2
                if step < min_step:
                    raise NewtonDivergenceError(
                        f"zero lost after t={t_cur}", last_good_t=t_cur, partial=rows) from None
                continue
            t_cur = t_next if h == t_next - t_cur else t_cur + h
            x = x_new
            fp = _slope(sol, t_cur, x)
        rows.append((t_cur, x, fp))
    return TracedBoundary(rows)


# -- identity checks -------------------------------------------------------------


def remark1_residuals(sol: HeatSolution, bnd: Boundary, t_grid):
    """Both boundary identities at (t, f(t)), each divided by |nu'| + 1."""
    t = np.asarray(t_grid, dtype=float)
    r1, r2 = [], []
    for tt in t:
        x = float(bnd.f(tt))
        f1, f2 = float(bnd.df(tt)), float(bnd.d2f(tt))
        n0, n1, n2, n3, n4 = (float(v) for v in sol.partials(tt, x, 4))
        scale = abs(n1) + 1.0
        r1.append(abs(f1 * n1 + 0.5 * n2) / scale)
        r2.append(abs(f2 * n1 + f1 * (f1 * n2 + n3) + 0.25 * n4) / scale)
    return np.array(r1), np.array(r2)


def check_remark1(sol: HeatSolution, bnd: Boundary, t_grid, tol=None) -> VerificationReport:
    from .defaults import TOLERANCES
    tol = TOLERANCES["remark1"] if tol is None else tol
    r1, r2 = remark1_residuals(sol, bnd, t_grid)
    rep = VerificationReport(config={"solution": sol.describe(), "boundary": bnd.describe()})
    rep.add("remark1_first", r1, tol)
    rep.add("remark1_second", r2, tol)
    return rep


def check_boundary_vanishing(sol: HeatSolution, bnd: Boundary, t_grid, tol, scale=1.0,
                             name="boundary_vanishing") -> VerificationReport:
    """max |nu(t, f(t))| / scale over ``t_grid``."""
    t = np.asarray(t_grid, dtype=float)
    vals = np.array([sol.value(tt, float(bnd.f(tt))) for tt in t])
    rep = VerificationReport()
    rep.add(name, np.abs(vals) / scale, tol, note=f"scale={scale:.6g}")
    return rep


def _rel(lhs, terms):
    scale = max([abs(lhs)] + [abs(v) for v in terms]) + 1.0
    return abs(lhs - sum(terms)) / scale


def master_identity_residuals(sol: Convolution, spec: PhiSpec, samples) -> dict[str, np.ndarray]:
    """Residuals of the nu-level identities inherited from the phi ODE.

    Convolving x*g with the heat kernel gives (x + t d/dx) applied to the
    convolution of g, so for the second-order family

        (1 - d1 t - c2 t^2) nu'' = (d0 + d1 x + c1 t + 2 c2 t x) nu'
                                   + (c0 + c1 x + c2 x^2 + c2 t) nu

    and for phi''' = b2 x^2 phi

        nu'''  = b2 t^2 nu'' + 2 b2 t x nu' + b2 (x^2 + t) nu
        nu'''' = b2 t^2 nu''' + 2 b2 t x nu'' + b2 (x^2 + 3t) nu' + 2 b2 x nu

    On a zero curve of nu the undifferentiated nu terms drop out.
    """
    fam = spec.family
    out: dict[str, list] = {}
    for t, x in samples:
        t, x = float(t), float(x)
        if isinstance(fam, SecondOrder):
            n0, n1, n2 = (float(v) for v in sol.partials(t, x, 2))
            d0, d1, c0, c1, c2 = fam.d0, fam.d1, fam.c0, fam.c1, fam.c2
            lhs = (1 - d1 * t - c2 * t * t) * n2
            terms = [(d0 + d1 * x + c1 * t + 2 * c2 * t * x) * n1,
                     (c0 + c1 * x + c2 * x * x + c2 * t) * n0]
            out.setdefault("id1", []).append(_rel(lhs, terms))
        elif isinstance(fam, ThirdOrderCubic):
            b2 = fam.b2
            n0, n1, n2, n3, n4 = (float(v) for v in sol.partials(t, x, 4))
            out.setdefault("cu1", []).append(_rel(n3, [
                b2 * t * t * n2, 2 * b2 * t * x * n1, b2 * (x * x + t) * n0]))
            out.setdefault("cu2", []).append(_rel(n4, [
                b2 * t * t * n3, 2 * b2 * t * x * n2, b2 * (x * x + 3 * t) * n1,
                2 * b2 * x * n0]))
        else:
            raise TypeError(f"unsupported family {type(fam).__name__}")
    return {k: np.array(v) for k, v in out.items()}


def check_master_identity(sol: Convolution, spec: PhiSpec, samples, tol=None) -> VerificationReport:
    from .defaults import TOLERANCES
    tol = TOLERANCES["master_identity"] if tol is None else tol
    rep = VerificationReport(config={"solution": sol.describe()})
    for name, res in master_identity_residuals(sol, spec, samples).items():
        rep.add(name, res, tol)
    return rep
