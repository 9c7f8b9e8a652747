# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled variate-stream kernel.

Mirrors _rngpure.py exactly (same LCG constants, same Box-Muller cosine
branch, same consumption order); compiled without fast-math so IEEE
semantics match the pure path bit for bit.
"""

from libc.math cimport cos, log, sqrt

BACKEND = "cython"

cdef unsigned long long _A = 6364136223846793005ULL
cdef unsigned long long _C = 1442695040888963407ULL
cdef double _TWO_PI = 6.283185307179586476925287
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


def uniform_fill(seed, double[::1] out):
    """Fill a float64 buffer with uniforms in (0, 1) from the given seed."""
    cdef unsigned long long state = <unsigned long long> (int(seed) & ((1 << 64) - 1))
    cdef Py_ssize_t i, n = out.shape[0]
    for i in range(n):
        state = _A * state + _C
        out[i] = (<double> (state >> 11) + 0.5) * _INV_2_53
    return state


def normal_fill(seed, double[::1] out):
    """Fill a float64 buffer with standard normal draws from the given seed."""
    cdef unsigned long long state = <unsigned long long> (int(seed) & ((1 << 64) - 1))
    cdef Py_ssize_t i, n = out.shape[0]
    cdef double u1, u2
    for i in range(n):
        state = _A * state + _C
        u1 = (<double> (state >> 11) + 0.5) * _INV_2_53
        state = _A * state + _C
        u2 = (<double> (state >> 11) + 0.5) * _INV_2_53
        out[i] = sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)
    return state
