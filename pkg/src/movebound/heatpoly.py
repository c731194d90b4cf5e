"""Heat polynomials and the λ-derivatives of the Fourier heat kernel.

The sequence v_j(s, x) is generated by

    exp(mu*x + mu**2 * s) = sum_j v_j(s, x) mu**j / j!

so that with mu = i*lam and s = t/2 the left side is the Fourier-side heat
kernel exp(i*lam*x - lam**2*t/2).  The three-term recurrence

    v_0 = 1,  v_1 = x,  v_{j+1} = x v_j + 2 j s v_{j-1}

follows by differentiating in mu.  With this convention the p-th derivative
of the kernel in lam is v_p(-t/2, i*x - lam*t) times the kernel itself.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 64


def heat_poly(j: int, s, x):
    """Return v_j(s, x) by forward recurrence.

    Works elementwise on numpy arrays and on complex ``x``.  Real inputs give
    real outputs.
    """
    if j < 0:
        raise ValueError("order j must be non-negative")
    if j > MAX_ORDER:
        raise ValueError(f"order j={j} exceeds cap {MAX_ORDER}")
    prev = np.ones_like(x) if isinstance(x, np.ndarray) else 1.0
    if j == 0:
        return prev
    cur = x
    for k in range(1, j):
        prev, cur = cur, x * cur + 2 * k * s * prev
    return cur


def heat_kernel_fourier(lam, t, x):
    """exp(i*lam*x - lam**2*t/2)."""
    return np.exp(1j * lam * x - 0.5 * lam * lam * t)


def kernel_deriv(p: int, lam, t, x):
    """p-th derivative in ``lam`` of exp(i*lam*x - lam**2*t/2)."""
    if t <= 0:
        raise ValueError("t must be positive")
    y = 1j * x - lam * t
    return heat_poly(p, -0.5 * t, y) * heat_kernel_fourier(lam, t, x)
