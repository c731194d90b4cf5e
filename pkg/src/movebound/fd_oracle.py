"""Crank-Nicolson solver for the heat equation killed on a moving boundary.

Working in y = x - f(t) fixes the absorbing boundary at y = 0; the PDE
becomes u_t = u_yy / 2 + f'(t) u_y on [0, W].  Each step is one
tridiagonal solve.  Used only as an independent cross-check of the
closed-form and convolution solutions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from .errors import SingularSystemError

MAX_CELLS = 2 ** 24

ZERO_FLUX = "zero-flux"


@dataclass
class FdGrid:
    t0: float
    t1: float
    width: float
    nx: int = 400
    nt: int = 400
    values: np.ndarray | None = None
    snapshots: list = field(default_factory=list)

    def __post_init__(self):
        if not self.t1 > self.t0 > 0:
            raise ValueError("need t1 > t0 > 0")
        if self.width <= 0:
            raise ValueError("width must be positive")
        if self.nx < 64 or self.nt < 64:
            raise ValueError("nx and nt must be >= 64")
        if self.nx * self.nt > MAX_CELLS:
            raise ValueError(f"nx * nt exceeds {MAX_CELLS}")

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, self.width, self.nx + 1)

    @property
    def dy(self) -> float:
        return self.width / self.nx

    @property
    def dt(self) -> float:
        return (self.t1 - self.t0) / self.nt

    def write_csv(self, path_or_file):
        """Write snapshots (or the final slice) as rows of (t, y, value)."""
        rows = self.snapshots or [(self.t1, self.values)]
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "y", "value"])
            for t, vals in rows:
                for yy, v in zip(self.y, vals):
                    w.writerow([f"{t:.17g}", f"{yy:.17g}", f"{v:.17g}"])
        finally:
            if own:
                fh.close()


def fd_evolve(bnd, initial: Callable, grid: FdGrid, far=0.0,
              snapshot_every: int | None = None) -> FdGrid:
    """Evolve from ``grid.t0`` to ``grid.t1``; returns a new grid holding the final slice.

    ``initial`` maps y to u(t0, y) and must vanish at y = 0.  ``far`` sets
    the closure at y = W: a callable t -> value (Dirichlet with known data),
    a constant (Dirichlet), or ``"zero-flux"``.
    """
    y = grid.y
    u = np.asarray(initial(y), dtype=float).copy()
    scale = 1.0 + np.max(np.abs(u))
    if abs(u[0]) > 1e-8 * scale:
        raise ValueError(f"initial data must vanish at y=0 (got {u[0]:.3g})")
    u[0] = 0.0
    dy, dt, n = grid.dy, grid.dt, grid.nx

    neumann = isinstance(far, str)
    if neumann and far != ZERO_FLUX:
        raise ValueError(f"unknown far-field closure {far!r}")
    if not neumann:
        far_value = far if callable(far) else (lambda t, c=float(far): c)
        u[-1] = far_value(grid.t0)

    # unknowns: u[1..n-1] (Dirichlet far) or u[1..n] (zero flux, ghost node mirrored)
    m = n if neumann else n - 1
    snaps = [(grid.t0, u.copy())] if snapshot_every else []
    for k in range(grid.nt):
        ta = grid.t0 + k * dt
        tb = grid.t0 + (k + 1) * dt
        a = float(bnd.df(ta + 0.5 * dt))
        lo = 0.5 / dy ** 2 - a / (2 * dy)
        di = -1.0 / dy ** 2
        up = 0.5 / dy ** 2 + a / (2 * dy)
        if neumann:
            ext = np.append(u, u[-2])
            lu = lo * ext[:-2] + di * ext[1:-1] + up * ext[2:]
        else:
            lu = lo * u[:-2] + di * u[1:-1] + up * u[2:]
        rhs = u[1:1 + m] + 0.5 * dt * lu
        ab = np.zeros((3, m))
        ab[0, 1:] = -0.5 * dt * up
        ab[1, :] = 1.0 - 0.5 * dt * di
        ab[2, :-1] = -0.5 * dt * lo
        if neumann:
            ab[2, -2] = -0.5 * dt * (lo + up)
        else:
            ub = far_value(tb)
            rhs[-1] += 0.5 * dt * up * ub
        try:
            inner = solve_banded((1, 1), ab, rhs)
        except (LinAlgError, ValueError) as exc:
            raise SingularSystemError(str(exc)) from exc
        if not np.all(np.isfinite(inner)):
            raise SingularSystemError(f"non-finite values at t={tb}")
        u = np.concatenate([[0.0], inner]) if neumann else np.concatenate([[0.0], inner, [ub]])
        if snapshot_every and ((k + 1) % snapshot_every == 0 or k + 1 == grid.nt):
            snaps.append((tb, u.copy()))
    return replace(grid, values=u, snapshots=snaps)


def analytic_far_field(sol, bnd, width):
    """Far-field closure t -> nu(t, f(t) + W) from a known solution."""
    return lambda t: float(sol.value(t, float(bnd.f(t)) + width))


def cross_check(sol, bnd, t0, t1, nx=400, nt=400, width=None):
    """Evolve nu(t0, .) with the FD scheme and compare with nu(t1, .).

    Returns (max-norm error, max |nu(t1, .)|, final grid).
    """
    if width is None:
        ts = np.linspace(t0, t1, 65)
        width = 8.0 + float(np.max(np.abs(bnd.f(ts))))
    grid = FdGrid(t0, t1, width, nx, nt)
    f0, f1 = float(bnd.f(t0)), float(bnd.f(t1))
    out = fd_evolve(bnd, lambda y: np.asarray(sol.value(t0, f0 + y)), grid,
                    far=analytic_far_field(sol, bnd, width))
    exact = np.asarray(sol.value(t1, f1 + out.y))
    return float(np.max(np.abs(out.values - exact))), float(np.max(np.abs(exact))), out
