# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: compensated reductions and per-coordinate mixing.

Mirrors the API of ``_kernels_py``; ``hypercheck.kernels`` picks whichever
is importable.  All sums use Neumaier compensation so accumulations stay
well inside the 1e-10 identity budget even on 2**24-entry tables.
"""

from libc.math cimport fabs, pow

import numpy as np


cdef inline void _acc(double x, double* s, double* c) nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def weighted_sum(const double[::1] w, const double[::1] v):
    """Compensated sum of w[i]*v[i]."""
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double s = 0.0, c = 0.0
    for i in range(n):
        _acc(w[i] * v[i], &s, &c)
    return s + c


def weighted_dot(const double[::1] w, const double[::1] f, const double[::1] g):
    """Compensated sum of w[i]*f[i]*g[i]."""
    cdef Py_ssize_t i, n = f.shape[0]
    cdef double s = 0.0, c = 0.0
    for i in range(n):
        _acc(w[i] * f[i] * g[i], &s, &c)
    return s + c


def weighted_pow_sum(const double[::1] w, const double[::1] v, double q):
    """Compensated sum of w[i]*|v[i]|**q."""
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double s = 0.0, c = 0.0
    if q == 2.0:
        for i in range(n):
            _acc(w[i] * v[i] * v[i], &s, &c)
    elif q == 1.0:
        for i in range(n):
            _acc(w[i] * fabs(v[i]), &s, &c)
    else:
        for i in range(n):
            _acc(w[i] * pow(fabs(v[i]), q), &s, &c)
    return s + c


def axis_mix(const double[::1] v, const double[::1] mu, Py_ssize_t stride, double rho):
    """rho*v + (1-rho)*(mu-average over one mixed-radix coordinate).

    The coordinate has ``k = len(mu)`` values and stride ``stride`` in the
    flat table; rho=0 gives the conditional-expectation operator for that
    coordinate.
    """
    cdef Py_ssize_t k = mu.shape[0]
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t block = stride * k
    cdef Py_ssize_t b, off, j, base
    cdef double m, keep = 1.0 - rho
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    for b in range(0, n, block):
        for off in range(stride):
            base = b + off
            m = 0.0
            for j in range(k):
                m += mu[j] * v[base + j * stride]
            for j in range(k):
                out[base + j * stride] = rho * v[base + j * stride] + keep * m
    return out_arr
