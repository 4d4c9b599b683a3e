"""Pure-Python/numpy fallback for the compiled kernels.

Reductions go through ``math.fsum`` (exactly rounded, hence deterministic
regardless of value order), so this path is the accuracy reference the
compiled path is tested against.
"""

import math

import numpy as np


def weighted_sum(w, v):
    return math.fsum(w * v)


def weighted_dot(w, f, g):
    return math.fsum(w * f * g)


def weighted_pow_sum(w, v, q):
    if q == 2.0:
        return math.fsum(w * v * v)
    if q == 1.0:
        return math.fsum(w * np.abs(v))
    return math.fsum(w * np.abs(v) ** q)


def axis_mix(v, mu, stride, rho):
    k = mu.shape[0]
    t = v.reshape(-1, k, stride)
    m = np.einsum("j,ojs->os", mu, t)
    out = rho * t + (1.0 - rho) * m[:, None, :]
    return np.ascontiguousarray(out.reshape(v.shape[0]))
