"""Scalar special functions: heat kernel, 0F2 series, Airy Ai and its zeros,
and the Pearcey-type integral.

Airy evaluation: Maclaurin series on |x| <= 4.  On [-60, -4] the Airy ODE is
integrated outward from -4 once and kept as a dense table.  For x > 4 the
forward direction is unstable (it picks up Bi), so x >= 12 uses the
asymptotic expansion and (4, 12) a table integrated backward from 12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NonconvergenceError, QuadratureError, RootNotBracketedError
from .quadrature import QuadratureConfig, legendre_panels

__all__ = [
    "SeriesResult",
    "gauss_kernel",
    "hyp0f2",
    "hyp0f2_terms",
    "hyp0f2_reverse",
    "airy_ai",
    "airy_pair",
    "airy_derivs",
    "airy_root",
    "pearcey_nu",
    "pearcey_partials",
    "PEARCEY_CUTOFF",
    "AI0",
    "AIP0",
]


def gauss_kernel(t, x):
    """Fundamental solution (2 pi t)^(-1/2) exp(-x^2 / 2t) of nu_t = nu_xx / 2."""
    if np.any(np.asarray(t) <= 0):
        raise ValueError("t must be positive")
    return np.exp(-0.5 * np.square(x) / t) / np.sqrt(2.0 * np.pi * t)


# -- 0F2 ---------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    truncation_estimate: float


def _check_pochhammer(b):
    if b <= 0 and float(b).is_integer():
        raise ValueError(f"denominator parameter {b} is zero or a negative integer")


def hyp0f2(b1: float, b2: float, z: float, max_terms: int = 10_000,
           rel_tol: float = 1e-15) -> SeriesResult:
    """Sum 0F2(; b1, b2; z) = sum_k z^k / ((b1)_k (b2)_k k!).

    Once the term ratio |z| / ((b1+k)(b2+k)(k+1)) is below one it only
    decreases, so the tail is bounded by a geometric series in that ratio.
    Summation stops when the bound drops below ``rel_tol * |sum|``.
    """
    _check_pochhammer(b1)
    _check_pochhammer(b2)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        term *= z / ((b1 + k) * (b2 + k) * (k + 1))
        k += 1
        total += term
        r = abs(z) / abs((b1 + k) * (b2 + k) * (k + 1))
        if r < 1.0 and b1 + k > 0 and b2 + k > 0:
            bound = abs(term) * r / (1.0 - r)
            if bound <= rel_tol * abs(total):
                return SeriesResult(total, k + 1, bound)
        if k >= max_terms:
            raise NonconvergenceError(
                f"0F2 series at z={z} not converged after {max_terms} terms")


def hyp0f2_terms(b1: float, b2: float, z: float, n: int) -> np.ndarray:
    """First ``n`` terms of the 0F2 series."""
    _check_pochhammer(b1)
    _check_pochhammer(b2)
    k = np.arange(n - 1, dtype=float)
    ratios = z / ((b1 + k) * (b2 + k) * (k + 1))
    return np.concatenate([[1.0], np.cumprod(ratios)])


def hyp0f2_reverse(b1: float, b2: float, z: float) -> float:
    """0F2 summed smallest term first, using the forward term count."""
    n = hyp0f2(b1, b2, z).terms_used
    total = 0.0
    for term in hyp0f2_terms(b1, b2, z, n)[::-1]:
        total += term
    return total


# -- Airy --------------------------------------------------------------------

AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)

_SERIES_RADIUS = 4.0
_ASYMPTOTIC_FROM = 12.0
AIRY_MIN_X = -60.0
_ODE_TOL = dict(method="DOP853", rtol=1e-13, atol=1e-16, dense_output=True)


@lru_cache(maxsize=1)
def _series_coeffs(n: int = 120) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros(n)
    a[0], a[1] = AI0, AIP0
    for k in range(n - 3):
        a[k + 3] = a[k] / ((k + 3) * (k + 2))
    da = a[1:] * np.arange(1, n)
    return a, da


def _airy_series(x):
    a, da = _series_coeffs()
    return (np.polynomial.polynomial.polyval(x, a),
            np.polynomial.polynomial.polyval(x, da))


def _airy_asymptotic(x, nterms: int = 25):
    zeta = 2.0 / 3.0 * x ** 1.5
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    su = np.zeros_like(x)
    sv = np.zeros_like(x)
    u = 1.0
    for k in range(nterms):
        if k > 0:
            u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        v = -(6 * k + 1) / (6 * k - 1) * u
        sign = (-1) ** k
        su = su + sign * u / zeta ** k
        sv = sv + sign * v / zeta ** k
    return pref * su / x ** 0.25, -pref * x ** 0.25 * sv


def _airy_rhs(x, u):
    return [u[1], x * u[0]]


@lru_cache(maxsize=1)
def _negative_table():
    y0 = [float(v) for v in _airy_series(-_SERIES_RADIUS)]
    sol = solve_ivp(_airy_rhs, (-_SERIES_RADIUS, AIRY_MIN_X), y0, **_ODE_TOL)
    return sol.sol


@lru_cache(maxsize=1)
def _positive_table():
    x = np.array([_ASYMPTOTIC_FROM])
    ai, aip = _airy_asymptotic(x)
    # Ai is ~1e-12 here: control relative error only
    sol = solve_ivp(_airy_rhs, (_ASYMPTOTIC_FROM, _SERIES_RADIUS),
                    [ai[0], aip[0]], **{**_ODE_TOL, "atol": 1e-40})
    return sol.sol


def airy_pair(x):
    """Return (Ai(x), Ai'(x)) for real x >= -60."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < AIRY_MIN_X):
        raise ValueError(f"airy evaluation supported for x >= {AIRY_MIN_X}")
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    near = np.abs(x) <= _SERIES_RADIUS
    left = x < -_SERIES_RADIUS
    mid = (x > _SERIES_RADIUS) & (x < _ASYMPTOTIC_FROM)
    far = x >= _ASYMPTOTIC_FROM
    if near.any():
        ai[near], aip[near] = _airy_series(x[near])
    if left.any():
        ai[left], aip[left] = _negative_table()(x[left])
    if mid.any():
        ai[mid], aip[mid] = _positive_table()(x[mid])
    if far.any():
        ai[far], aip[far] = _airy_asymptotic(x[far])
    if scalar:
        return float(ai[0]), float(aip[0])
    return ai, aip


def airy_ai(x):
    """Airy function Ai on x >= -60."""
    return airy_pair(x)[0]


def airy_derivs(x, n: int):
    """Ai and its derivatives through order n, via Ai^(k+2) = x Ai^(k) + k Ai^(k-1)."""
    ai, aip = airy_pair(x)
    out = [ai, aip]
    for k in range(n - 1):
        nxt = x * out[k]
        if k >= 1:
            nxt = nxt + k * out[k - 1]
        out.append(nxt)
    return out[: n + 1]


def airy_root(n: int, window: tuple[float, float] = (-40.0, 0.0),
              step: float = 0.02, xtol: float = 1e-13) -> float:
    """n-th negative zero of Ai (n=1 is the one closest to 0).

    Sign changes of Ai are located on a uniform grid scanned from the right
    end of ``window`` and refined by bisection.
    """
    if n < 1:
        raise ValueError("root index must be >= 1")
    lo, hi = window
    grid = np.arange(hi, lo - step, -step)
    grid = grid[grid >= max(lo, AIRY_MIN_X)]
    vals = airy_ai(grid)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(idx) < n:
        raise RootNotBracketedError(
            f"window {window} holds {len(idx)} Airy roots, asked for root {n}")
    a, b = grid[idx[n - 1] + 1], grid[idx[n - 1]]
    fa = airy_ai(a)
    while b - a > xtol * max(1.0, abs(a)):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = airy_ai(m)
        if fm == 0.0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


# -- Pearcey -----------------------------------------------------------------

PEARCEY_CUTOFF = max(8.0, (72.0 * math.log(10.0)) ** 0.25)
_PEARCEY_ORDER = 32
_PEARCEY_MAX_PANELS = 512


def _pearcey_moment(t: float, x: np.ndarray, n: int, panels: int) -> np.ndarray:
    lam, w = legendre_panels(0.0, PEARCEY_CUTOFF, panels, _PEARCEY_ORDER)
    weight = w * lam ** n * np.exp(-0.5 * t * lam ** 2 - 0.25 * lam ** 4)
    phase = np.multiply.outer(x, lam)
    # d^n/dx^n cos(lam x) = lam^n cos(lam x + n pi / 2)
    trig = [np.cos, lambda a: -np.sin(a), lambda a: -np.cos(a), np.sin][n % 4]
    return trig(phase) @ weight / np.pi


def pearcey_partials(t: float, x, n: int = 0, quad: QuadratureConfig | None = None):
    """x-derivatives 0..n of nu(t,x) = (1/pi) int_0^inf exp(-lam^2 t/2 - lam^4/4) cos(lam x) dlam.

    Panels of a composite Gauss-Legendre rule on [0, PEARCEY_CUTOFF] are
    doubled until two successive levels agree within ``quad.abs_tol``.
    Returns an array of shape (n+1, *x.shape).
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    quad = quad or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    flat = np.atleast_1d(x).ravel()
    out = []
    for k in range(n + 1):
        panels = 4
        coarse = _pearcey_moment(t, flat, k, panels)
        while True:
            panels *= 2
            fine = _pearcey_moment(t, flat, k, panels)
            if np.max(np.abs(fine - coarse)) <= quad.abs_tol:
                break
            if panels >= _PEARCEY_MAX_PANELS:
                raise QuadratureError(
                    f"Pearcey quadrature did not reach {quad.abs_tol} at t={t}")
            coarse = fine
        out.append(fine.reshape(x.shape))
    return np.array(out)


def pearcey_nu(t: float, x, quad: QuadratureConfig | None = None):
    """Real form of (1/2pi) int exp(i lam x - lam^2 t/2 - lam^4/4) dlam."""
    val = pearcey_partials(t, x, 0, quad)[0]
    return float(val) if np.ndim(val) == 0 else val
