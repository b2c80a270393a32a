"""Pure-Python/numpy implementation of the dispersion kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is unavailable or ``IWAVE_PURE_PYTHON=1`` is set.
"""

import math

import numpy as np

# below this argument 1/tanh(x) is replaced by 1/x + x/3 - x^3/45
SERIES_CUTOFF = 1e-4


def inv_tanh(x):
    if abs(x) < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    return 1.0 / math.tanh(x)


def x_coth(x):
    """x/tanh(x), equal to 1 at 0."""
    if abs(x) < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 + x2 * (1.0 / 3.0 - x2 / 45.0)
    return x / math.tanh(x)


def coth_sum(rho, h, g):
    """rho/tanh(g) + 1/tanh(h g)."""
    return rho * inv_tanh(g) + inv_tanh(h * g)


def dispersion_D(rho, h, alpha, beta, l1, l2):
    g = math.hypot(l1, l2)
    if g == 0.0:
        return 0.0
    # l1^2 B(g) written as l1 (l1/g) g B(g) so tiny g cannot overflow
    gb = rho * x_coth(g) + x_coth(h * g) / h
    return l1 * (l1 / g) * gb - (alpha + beta * g * g) * g


def mode_residual(rho, h, alpha, beta, c1, s1, c2, s2, nu0, k, s):
    kn = k * nu0
    return dispersion_D(rho, h, alpha, beta, kn * c2 + s * c1, kn * s2 + s * s1)


def _inv_tanh_array(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < SERIES_CUTOFF
    big = ~small
    out[big] = 1.0 / np.tanh(x[big])
    xs = x[small]
    with np.errstate(divide="ignore"):
        out[small] = 1.0 / xs + xs * (1.0 / 3.0 - xs * xs / 45.0)
    return out


def _x_coth_array(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = np.abs(x) < SERIES_CUTOFF
    big = ~small
    out[big] = x[big] / np.tanh(x[big])
    x2 = x[small] ** 2
    out[small] = 1.0 + x2 * (1.0 / 3.0 - x2 / 45.0)
    return out


def mode_residual_array(rho, h, alpha, beta, c1, s1, c2, s2, nu0, k, s):
    s = np.asarray(s, dtype=float)
    kn = k * nu0
    l1 = kn * c2 + s * c1
    l2 = kn * s2 + s * s1
    g = np.hypot(l1, l2)
    out = np.zeros_like(g)
    nz = g > 0.0
    gn = g[nz]
    gb = rho * _x_coth_array(gn) + _x_coth_array(h * gn) / h
    out[nz] = l1[nz] * (l1[nz] / gn) * gb - (alpha + beta * gn * gn) * gn
    return out


def branch_l2sq_array(rho, h, alpha, beta, a):
    """l2^2 along the dispersion branch, a^2 - (alpha + beta a^2) a / (rho coth a + coth ha)."""
    a = np.asarray(a, dtype=float)
    ab = rho * _x_coth_array(a) + _x_coth_array(h * a) / h
    return a * a - (alpha + beta * a * a) * a * a / ab
