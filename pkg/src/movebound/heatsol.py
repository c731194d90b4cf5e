"""Solutions nu(t, x) of nu_t = nu_xx / 2.

Closed forms (linear and Airy boundaries), the Pearcey integral, and Gaussian
convolutions nu(t, y) = E[phi(y - sqrt(t) Z)].  Spatial partials of the
convolution are taken under the integral, i.e. as Gaussian averages of
phi^(n); finite differences only appear in residual checks.
"""

from __future__ import annotations

import math
import warnings
from functools import cached_property

import numpy as np
from scipy.integrate import IntegrationWarning, quad as _scipy_quad

from .errors import DomainExceededError, QuadratureError
from .heatpoly import heat_poly
from .phi_ode import PhiSolution
from .quadrature import ADAPTIVE_TRUNCATED, QuadratureConfig, standard_normal_nodes
from .special import airy_derivs, airy_root, gauss_kernel, pearcey_partials

__all__ = [
    "QuadratureConfig",
    "HeatSolution",
    "LinearClosedForm",
    "AiryQuadratic",
    "PearceyIntegral",
    "Convolution",
    "nu_linear",
    "nu_airy",
    "nu_convolution",
    "nu_partials",
    "nu_t_fd",
    "heat_residual",
]


def _out(val):
    val = np.asarray(val)
    return float(val) if val.ndim == 0 else val


class HeatSolution:
    """Common interface: ``value(t, x)`` and ``partials(t, x, n)``.

    ``partials`` returns an array of nu^(0..n) with shape (n+1, *x.shape).
    """

    kind = "abstract"

    def value(self, t, x):
        return _out(self.partials(t, x, 0)[0])

    def partials(self, t, x, n):
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


class LinearClosedForm(HeatSolution):
    """nu = x (2 pi t^3)^(-1/2) e^(-x^2/2t) + b (2 pi t)^(-1/2) e^(-x^2/2t); zero on x = -b t."""

    kind = "linear"

    def __init__(self, b: float):
        self.b = float(b)

    def partials(self, t, x, n):
        if t <= 0:
            raise ValueError("t must be positive")
        x = np.asarray(x, dtype=float)
        h = gauss_kernel(t, x)
        # h^(k) = (-1/t)^k v_k(-t/2, x) h
        hk = [(-1.0 / t) ** k * heat_poly(k, -0.5 * t, x) * h for k in range(n + 1)]
        lead = x / t + self.b
        out = [lead * hk[0]]
        for k in range(1, n + 1):
            out.append(lead * hk[k] + k / t * hk[k - 1])
        return np.array(out)

    def describe(self):
        return {"kind": self.kind, "b": self.b}


class AiryQuadratic(HeatSolution):
    """nu = exp(t^3/12 + t x/2) Ai(x + t^2/4); zero on x = xi - t^2/4 for any Airy zero xi."""

    kind = "airy"

    def __init__(self, root_index: int = 1):
        if root_index < 1:
            raise ValueError("root_index must be >= 1")
        self.root_index = int(root_index)

    @cached_property
    def root(self) -> float:
        return airy_root(self.root_index)

    def partials(self, t, x, n):
        if t < 0:
            raise ValueError("t must be non-negative")
        x = np.asarray(x, dtype=float)
        e = np.exp(t ** 3 / 12.0 + 0.5 * t * x)
        ai = airy_derivs(x + 0.25 * t * t, n)
        out = []
        for m in range(n + 1):
            s = sum(math.comb(m, k) * (0.5 * t) ** (m - k) * ai[k] for k in range(m + 1))
            out.append(e * s)
        return np.array(out)

    def describe(self):
        return {"kind": self.kind, "root_index": self.root_index}


class PearceyIntegral(HeatSolution):
    """nu = (1/2pi) int exp(i lam x - lam^2 t/2 - lam^4/4) dlam."""

    kind = "pearcey"

    def __init__(self, quad: QuadratureConfig | None = None):
        self.quad = quad or QuadratureConfig()

    def partials(self, t, x, n):
        return pearcey_partials(t, x, n, self.quad)


class Convolution(HeatSolution):
    """nu(t, y) = int h(t, x) phi(y - x) dx for an ODE-defined phi."""

    kind = "convolution"

    def __init__(self, phi: PhiSolution, quad: QuadratureConfig | None = None):
        self.phi = phi
        self.quad = quad or QuadratureConfig()

    def partials(self, t, x, n):
        return _gaussian_average(self.phi, t, x, n, self.quad)

    def describe(self):
        fam = self.phi.spec.family
        return {"kind": self.kind, "family": type(fam).__name__, **vars(fam),
                "init": list(self.phi.spec.init), "domain": list(self.phi.domain),
                "quadrature": vars(self.quad)}


def _check_window(phi: PhiSolution, t, y, half):
    lo, hi = phi.domain
    if np.min(y) - half < lo or np.max(y) + half > hi:
        raise DomainExceededError(
            f"convolution window [{np.min(y) - half:.4g}, {np.max(y) + half:.4g}] "
            f"leaves phi domain [{lo}, {hi}]")


def _gaussian_average(phi: PhiSolution, t, y, n, quad: QuadratureConfig):
    """E[phi^(k)(y - sqrt(t) Z)] for k = 0..n, truncated to |Z| <= L.

    L starts at ``quad.half_width_sigmas``; if the integrand is not yet
    negligible at the window edge (fast-growing phi at larger t) the window
    is doubled once before giving up.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    y = np.asarray(y, dtype=float)
    flat = np.atleast_1d(y).ravel()
    sd = math.sqrt(t)
    widths = (quad.half_width_sigmas, 2.0 * quad.half_width_sigmas)
    for width in widths:
        half = width * sd
        try:
            _check_window(phi, t, flat, half)
        except DomainExceededError:
            if width == widths[0]:
                raise
            break
        if quad.method == ADAPTIVE_TRUNCATED:
            res = [[_adaptive_one(phi, t, yy, k, half, quad.abs_tol) for yy in flat]
                   for k in range(n + 1)]
            out = np.array([[v for v, _ in row] for row in res])
            edge = np.max(np.array([[e for _, e in row] for row in res]), axis=0)
        else:
            z, w = standard_normal_nodes(quad.nodes, width)
            pts = flat[:, None] - sd * z[None, :]
            d = phi.derivs(pts, n)
            out = d @ w
            edge = np.max(np.abs(d[..., [0, -1]] * w[[0, -1]]), axis=(0, 2))
        if np.all(edge <= quad.abs_tol * np.maximum(1.0, np.max(np.abs(out), axis=0))):
            return out.reshape((n + 1,) + y.shape)
    raise QuadratureError(
        f"integrand not negligible at the convolution window edge at t={t} "
        f"(edge contribution {np.max(edge):.3g}); reduce t or widen phi's domain")


def _adaptive_one(phi, t, y, k, half, abs_tol=1e-12):
    """Adaptive Gauss-Kronrod on [y - half, y + half]; returns (value, edge magnitude)."""
    def integrand(s):
        return gauss_kernel(t, y - s) * phi.derivs(s, k)[k]

    edge = half * max(abs(integrand(y - half)), abs(integrand(y + half)))
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, _ = _scipy_quad(integrand, y - half, y + half, points=[y],
                                 epsabs=abs_tol, epsrel=0.0, limit=400)
        except IntegrationWarning as exc:
            raise QuadratureError(f"adaptive quadrature failed at t={t}, y={y}: {exc}") from exc
    return val, edge


# -- functional entry points -------------------------------------------------


def nu_linear(b: float, t, x):
    """Closed-form solution vanishing on f(t) = -b t."""
    return LinearClosedForm(b).value(t, x)


def nu_airy(root_index: int, t, x):
    """exp(t^3/12 + t x/2) Ai(x + t^2/4); vanishes on f(t) = xi_root - t^2/4."""
    return AiryQuadratic(root_index).value(t, x)


def nu_convolution(phi: PhiSolution, t, y, quad: QuadratureConfig | None = None):
    """Gaussian average E[phi(y - sqrt(t) Z)]."""
    return _out(_gaussian_average(phi, t, y, 0, quad or QuadratureConfig())[0])


def nu_partials(sol: HeatSolution, t, x, n: int):
    """(list of nu^(0..n), nu_t) with nu_t = nu^(2) / 2."""
    if not 0 <= n <= 4:
        raise ValueError("n must be in 0..4")
    p = sol.partials(t, x, max(n, 2))
    return [_out(v) for v in p[: n + 1]], _out(0.5 * p[2])


def nu_t_fd(sol: HeatSolution, t, x, h: float = 1e-4):
    """Central finite difference of nu in t; kept independent of the spatial partials."""
    if t - h <= 0:
        raise ValueError("t - h must stay positive")
    return _out((np.asarray(sol.value(t + h, x)) - np.asarray(sol.value(t - h, x))) / (2 * h))


def heat_residual(sol: HeatSolution, t, x, h: float = 1e-4):
    """|FD nu_t - nu_xx / 2| / (1 + |nu|)."""
    p = sol.partials(t, x, 2)
    res = np.abs(np.asarray(nu_t_fd(sol, t, x, h)) - 0.5 * p[2]) / (1.0 + np.abs(p[0]))
    return _out(res)
