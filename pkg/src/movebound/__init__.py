"""Analytic solutions of the heat equation that vanish on moving boundaries."""

from .boundary import (
    CubicBoundary,
    LinearBoundary,
    QuadraticBoundary,
    RayleighBoundary,
    Theorem2Boundary,
    TracedBoundary,
    boundary_cubic,
    boundary_rayleigh,
    boundary_theorem2,
    boundary_trace,
    check_cubic_boundary_ode,
    check_master_identity,
    check_remark1,
    check_theorem2_family,
    pearcey_zero,
)
from .errors import *  # noqa: F401,F403
from .fd_oracle import FdGrid, cross_check, fd_evolve
from .heatpoly import heat_kernel_fourier, heat_poly, kernel_deriv
from .heatsol import (
    AiryQuadratic,
    Convolution,
    HeatSolution,
    LinearClosedForm,
    PearceyIntegral,
    heat_residual,
    nu_airy,
    nu_convolution,
    nu_linear,
    nu_partials,
)
from .phi_ode import PhiSolution, PhiSpec, SecondOrder, ThirdOrderCubic, cubic_phi, solve_phi
from .quadrature import QuadratureConfig
from .report import VerificationReport
from .special import airy_ai, airy_root, hyp0f2, pearcey_nu

__version__ = "0.1.0"
