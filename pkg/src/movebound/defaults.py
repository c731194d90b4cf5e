"""Versioned defaults: tolerances for every verification check and the
reference values the verification suites compare against."""

DEFAULTS_VERSION = "2026.10-1"

TOLERANCES = {
    "table_zero": 1e-8,
    "table_values": 1e-4,
    "heat_residual": 1e-4,
    "boundary_vanishing": 1e-6,
    "remark1": 1e-6,
    "master_identity": 1e-6,
    "theorem2_ode": 1e-9,
    "cubic_boundary_ode": 1e-12,
    "rayleigh_ode": 1e-9,
    "fd_linear": 2e-4,
    "fd_cubic": 5e-4,
    "fd_order_low": 1.5,
    "fd_order_high": 2.5,
    "trace_linear": 1e-9,
    "trace_airy": 1e-8,
    "trace_cubic": 1e-6,
    "airy_root": 1e-6,
    "hyp0f2_dual": 1e-13,
    "pearcey_even": 1e-12,
}

# nu(i/20, (i/20)^3/8 + 2), i = 1..10, for phi''' = -x^2 phi with phi = x 5^(-3/5) 0F2(;4/5,6/5;-x^5/125)
TABLE_B = (0.530853, 0.49626, 0.46151, 0.426968, 0.392976,
           0.359844, 0.327851, 0.297236, 0.268196, 0.240891)

AIRY_ROOT_1 = -2.338107

RNG_SEED = 20260101
