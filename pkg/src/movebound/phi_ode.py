"""Convolving functions phi defined by linear ODEs with polynomial coefficients.

Two families are supported:

* ``SecondOrder``:  phi'' = (d0 + d1 x) phi' + (c0 + c1 x + c2 x^2) phi
* ``ThirdOrderCubic``:  phi''' = b2 x^2 phi

Solutions are posed at x = 0 and integrated outward in both directions with
an embedded 8(5,3) Runge-Kutta pair (dense output), with a Taylor patch near
the origin.  For the cubic family phi grows like exp(c |x|^(5/3)); the heat
kernel exp(-x^2 / 2t) still dominates, which keeps the Gaussian average of
phi finite and lets convolution windows be truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainExceededError, GrowthOverflowError, StepFailureError
from .special import hyp0f2

GROWTH_CAP = 1e280
DEFAULT_DOMAIN = (-40.0, 40.0)
MAX_HALF_WIDTH = 60.0
EXAMPLE32_INIT = (0.0, 5.0 ** (-0.6), 0.0)

_SERIES_TERMS = 60


@dataclass(frozen=True)
class SecondOrder:
    d0: float = 0.0
    d1: float = 0.0
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0

    order = 2

    def rhs(self, x, u):
        return [u[1], (self.d0 + self.d1 * x) * u[1]
                + (self.c0 + self.c1 * x + self.c2 * x * x) * u[0]]

    def extend(self, x, d, n):
        """Append phi^(k) for k = 2..n to ``d = [phi, phi']`` by differentiating the ODE."""
        d0, d1, c0, c1, c2 = self.d0, self.d1, self.c0, self.c1, self.c2
        a = d0 + d1 * x
        b = c0 + c1 * x + c2 * x * x
        db = c1 + 2 * c2 * x
        for k in range(0, n - 1):
            nxt = a * d[k + 1] + (k * d1 + b) * d[k]
            if k >= 1:
                nxt = nxt + k * db * d[k - 1]
            if k >= 2:
                nxt = nxt + k * (k - 1) * c2 * d[k - 2]
            d.append(nxt)
        return d

    def taylor(self, init, n):
        a = np.zeros(n)
        a[:2] = init
        for k in range(n - 2):
            s = self.d0 * (k + 1) * a[k + 1] + (k * self.d1 + self.c0) * a[k]
            if k >= 1:
                s += self.c1 * a[k - 1]
            if k >= 2:
                s += self.c2 * a[k - 2]
            a[k + 2] = s / ((k + 2) * (k + 1))
        return a


@dataclass(frozen=True)
class ThirdOrderCubic:
    b2: float = -1.0

    order = 3

    def __post_init__(self):
        if self.b2 == 0:
            raise ValueError("b2 must be nonzero")

    def rhs(self, x, u):
        return [u[1], u[2], self.b2 * x * x * u[0]]

    def extend(self, x, d, n):
        """Append phi^(k) for k = 3..n using phi^(k+3) = b2 (x^2 phi^(k) + 2k x phi^(k-1) + k(k-1) phi^(k-2))."""
        for k in range(0, n - 2):
            nxt = x * x * d[k]
            if k >= 1:
                nxt = nxt + 2 * k * x * d[k - 1]
            if k >= 2:
                nxt = nxt + k * (k - 1) * d[k - 2]
            d.append(self.b2 * nxt)
        return d

    def taylor(self, init, n):
        a = np.zeros(n)
        a[:3] = init[0], init[1], init[2] / 2.0
        for k in range(2, n - 3):
            a[k + 3] = self.b2 * a[k - 2] / ((k + 3) * (k + 2) * (k + 1))
        return a


@dataclass(frozen=True)
class PhiSpec:
    """ODE family plus derivative values at x = 0."""

    family: SecondOrder | ThirdOrderCubic
    init: tuple[float, ...]

    def __post_init__(self):
        if len(self.init) != self.family.order:
            raise ValueError(
                f"{type(self.family).__name__} needs {self.family.order} initial values")
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))


@dataclass(frozen=True)
class PhiSolution:
    spec: PhiSpec
    domain: tuple[float, float]
    _pos: object = field(repr=False)
    _neg: object = field(repr=False)
    _coeffs: tuple = field(repr=False)
    x_series: float = 0.5

    @property
    def order(self):
        return self.spec.family.order

    def _base(self, x: np.ndarray) -> list[np.ndarray]:
        """phi^(0..order-1) at the points x (1-d array)."""
        lo, hi = self.domain
        if np.any(x < lo) or np.any(x > hi):
            raise DomainExceededError(
                f"evaluation outside phi domain [{lo}, {hi}]")
        out = np.empty((self.order, x.size))
        patch = np.abs(x) <= self.x_series
        pos = (x > self.x_series)
        neg = (x < -self.x_series)
        if patch.any():
            for k, c in enumerate(self._coeffs):
                out[k, patch] = np.polynomial.polynomial.polyval(x[patch], c)
        if pos.any():
            out[:, pos] = self._pos(x[pos])
        if neg.any():
            out[:, neg] = self._neg(x[neg])
        return list(out)

    def derivs(self, x, n: int):
        """Array of phi, phi', ..., phi^(n) at x; shape (n+1, *x.shape)."""
        if n < 0 or n > 6:
            raise ValueError("derivative order must be in 0..6")
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        d = self._base(flat)
        d = self.spec.family.extend(flat, d, n) if n >= self.order else d
        return np.array(d[: n + 1]).reshape((n + 1,) + x.shape)

    def __call__(self, x):
        val = self.derivs(x, 0)[0]
        return float(val) if val.ndim == 0 else val


def _growth_event(x, u):
    return GROWTH_CAP - abs(u[0])


_growth_event.terminal = True


def solve_phi(spec: PhiSpec, domain=DEFAULT_DOMAIN, rtol: float = 1e-12,
              atol: float = 1e-14) -> PhiSolution:
    """Integrate the ODE of ``spec`` outward from 0 across ``domain``."""
    lo, hi = float(domain[0]), float(domain[1])
    if not lo <= 0.0 <= hi:
        raise ValueError("domain must contain 0")
    if max(-lo, hi) > MAX_HALF_WIDTH:
        raise ValueError(f"domain half-width exceeds {MAX_HALF_WIDTH}")
    fam = spec.family
    sides = []
    for end in (hi, lo):
        if end == 0.0:
            sides.append(_constant(spec.init))
            continue
        sol = solve_ivp(fam.rhs, (0.0, end), list(spec.init), method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True, events=_growth_event)
        if sol.status == 1:
            raise GrowthOverflowError(
                f"|phi| passed {GROWTH_CAP:g} at x={sol.t_events[0][0]:.6g}; shrink the domain")
        if sol.status != 0:
            raise StepFailureError(sol.message)
        sides.append(sol.sol)
    a = fam.taylor(spec.init, _SERIES_TERMS)
    coeffs = [a]
    for _ in range(fam.order - 1):
        coeffs.append(np.polynomial.polynomial.polyder(coeffs[-1]))
    return PhiSolution(spec, (lo, hi), sides[0], sides[1], tuple(coeffs))


def _constant(init):
    vals = np.array(init, dtype=float)
    return lambda x: np.repeat(vals[:, None], np.size(x), axis=1)


def phi_higher_derivs(sol: PhiSolution, x, n: int) -> list:
    """[phi(x), phi'(x), ..., phi^(n)(x)]; orders past the ODE order via the differentiated ODE."""
    return list(sol.derivs(x, n))


@lru_cache(maxsize=8)
def cubic_phi(b2: float = -1.0, domain=DEFAULT_DOMAIN) -> PhiSolution:
    """Cached solution of phi''' = b2 x^2 phi with the default initial data (0, 5^(-3/5), 0)."""
    return solve_phi(PhiSpec(ThirdOrderCubic(b2), EXAMPLE32_INIT), domain)


def phi_example32(x):
    """x 5^(-3/5) 0F2(; 4/5, 6/5; -x^5/125), the series form of the b2 = -1 solution."""
    def one(v):
        return v * 5.0 ** (-0.6) * hyp0f2(0.8, 1.2, -v ** 5 / 125.0).value
    if np.ndim(x) == 0:
        return one(float(x))
    return np.array([one(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
