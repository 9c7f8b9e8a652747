"""Deterministic variate streams with a compiled fast path.

The Cython kernel (pathtrek._rngkernel) is used when it was built; otherwise
the bit-identical pure-Python implementation takes over.  Set PATHTREK_PURE_RNG=1
to force the pure path (used by the benchmark and by backend-equality tests).
"""

import os

import numpy as np

from . import _rngpure

if os.environ.get("PATHTREK_PURE_RNG"):
    _impl = _rngpure
else:
    try:
        from . import _rngkernel as _impl
    except ImportError:
        _impl = _rngpure


def backend():
    """Name of the active stream implementation: 'cython' or 'pure'."""
    return _impl.BACKEND


def uniform_stream(seed, count):
    """Uniform (0,1) draws as a float64 array; identical seed, identical bytes."""
    out = np.empty(int(count), dtype=np.float64)
    _impl.uniform_fill(seed, out)
    return out


def normal_stream(seed, count):
    """Standard normal draws as a float64 array; identical seed, identical bytes."""
    out = np.empty(int(count), dtype=np.float64)
    _impl.normal_fill(seed, out)
    return out
