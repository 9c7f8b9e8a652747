"""Pure-Python reference implementation of the deterministic variate stream.

Must stay line-for-line equivalent to _rngkernel.pyx: the compiled kernel is
an accelerator, not a different generator.  Both paths produce bit-identical
output for the same seed.

Generator: Knuth's MMIX linear congruential generator,
    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64
Uniforms take the top 53 bits offset by half an ulp, so u is in (0, 1)
exclusive.  Normals use the Box-Muller cosine branch, consuming exactly two
uniforms each.
"""

import math

BACKEND = "pure"

_A = 6364136223846793005
_C = 1442695040888963407
_MASK = (1 << 64) - 1
_TWO_PI = 6.283185307179586476925287
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def uniform_fill(seed, out):
    """Fill a float64 buffer with uniforms in (0, 1) from the given seed."""
    state = int(seed) & _MASK
    n = len(out)
    for i in range(n):
        state = (_A * state + _C) & _MASK
        out[i] = ((state >> 11) + 0.5) * _INV_2_53
    return state


def normal_fill(seed, out):
    """Fill a float64 buffer with standard normal draws from the given seed."""
    state = int(seed) & _MASK
    n = len(out)
    for i in range(n):
        state = (_A * state + _C) & _MASK
        u1 = ((state >> 11) + 0.5) * _INV_2_53
        state = (_A * state + _C) & _MASK
        u2 = ((state >> 11) + 0.5) * _INV_2_53
        out[i] = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
    return state
