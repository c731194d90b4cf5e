"""Quadrature settings and cached node sets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

GAUSS_HERMITE = "gauss-hermite"
ADAPTIVE_TRUNCATED = "adaptive-truncated"
METHODS = (GAUSS_HERMITE, ADAPTIVE_TRUNCATED)


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for Gaussian averages E[g(y - sqrt(t) Z)].

    ``half_width_sigmas`` truncates the average to |Z| <= L for both methods,
    so the convolution window is [y - L sqrt(t), y + L sqrt(t)].
    """

    method: str = GAUSS_HERMITE
    nodes: int = 200
    half_width_sigmas: float = 12.0
    abs_tol: float = 1e-12

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if self.nodes < 20:
            raise ValueError("nodes must be >= 20")
        if self.half_width_sigmas < 6:
            raise ValueError("half_width_sigmas must be >= 6")
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")


@lru_cache(maxsize=16)
def standard_normal_nodes(n: int, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes/weights for E[g(Z)], Z ~ N(0, 1), dropping |z| > cutoff."""
    x, w = np.polynomial.hermite.hermgauss(n)
    z = np.sqrt(2.0) * x
    w = w / np.sqrt(np.pi)
    keep = np.abs(z) <= cutoff
    z, w = z[keep], w[keep]
    z.setflags(write=False)
    w.setflags(write=False)
    return z, w


@lru_cache(maxsize=16)
def legendre_panels(a: float, b: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [a, b]."""
    g, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * g).ravel()
    wt = (half[:, None] * w).ravel()
    x.setflags(write=False)
    wt.setflags(write=False)
    return x, wt
