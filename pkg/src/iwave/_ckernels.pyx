# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dispersion kernels. Same contract as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport tanh, hypot, fabs

cnp.import_array()

cdef double SERIES_CUTOFF = 1e-4


cdef inline double _inv_tanh(double x) nogil:
    cdef double x2
    if fabs(x) < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 / x + x * (1.0 / 3.0 - x2 / 45.0)
    return 1.0 / tanh(x)


cdef inline double _x_coth(double x) nogil:
    cdef double x2
    if fabs(x) < SERIES_CUTOFF:
        x2 = x * x
        return 1.0 + x2 * (1.0 / 3.0 - x2 / 45.0)
    return x / tanh(x)


cdef inline double _D(double rho, double h, double alpha, double beta,
                      double l1, double l2) nogil:
    cdef double g = hypot(l1, l2)
    if g == 0.0:
        return 0.0
    # l1^2 B(g) written as l1 (l1/g) g B(g) so tiny g cannot overflow
    return l1 * (l1 / g) * (rho * _x_coth(g) + _x_coth(h * g) / h) - (alpha + beta * g * g) * g


def inv_tanh(double x):
    return _inv_tanh(x)


def coth_sum(double rho, double h, double g):
    return rho * _inv_tanh(g) + _inv_tanh(h * g)


def dispersion_D(double rho, double h, double alpha, double beta, double l1, double l2):
    return _D(rho, h, alpha, beta, l1, l2)


def mode_residual(double rho, double h, double alpha, double beta,
                  double c1, double s1, double c2, double s2,
                  double nu0, long k, double s):
    cdef double kn = k * nu0
    return _D(rho, h, alpha, beta, kn * c2 + s * c1, kn * s2 + s * s1)


def mode_residual_array(double rho, double h, double alpha, double beta,
                        double c1, double s1, double c2, double s2,
                        double nu0, long k, s):
    cdef double[::1] sv = np.ascontiguousarray(s, dtype=np.float64).ravel()
    cdef Py_ssize_t n = sv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double kn = k * nu0
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            ov[i] = _D(rho, h, alpha, beta, kn * c2 + sv[i] * c1, kn * s2 + sv[i] * s1)
    return out.reshape(np.shape(s))


def branch_l2sq_array(double rho, double h, double alpha, double beta, a):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64).ravel()
    cdef Py_ssize_t n = av.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef double x, ab
    with nogil:
        for i in range(n):
            x = av[i]
            ab = rho * _x_coth(x) + _x_coth(h * x) / h
            ov[i] = x * x - (alpha + beta * x * x) * x * x / ab
    return out.reshape(np.shape(a))
