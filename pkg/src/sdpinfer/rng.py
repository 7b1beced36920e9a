"""Counter-based deterministic randomness.

All noise draws in this package are derived from SplitMix64, keyed on
(seed, stream tag, counter words).  A draw therefore depends only on its
key, never on iteration order, which makes parallel generation and
re-generation of a single edge or node reproducible by construction.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# Stream tags keep edge, node, and trial keys in disjoint domains.
STREAM_EDGE = 0x45444745  # "EDGE"
STREAM_NODE = 0x4E4F4445  # "NODE"
STREAM_TRIAL = 0x5452494C  # "TRIL"
STREAM_INIT = 0x494E4954  # "INIT"


def splitmix64(x: np.ndarray | int) -> np.ndarray | np.uint64:
    """SplitMix64 finalizer: bijective 64-bit mix (Steele et al. 2014)."""
    old = np.seterr(over="ignore")
    try:
        z = (np.uint64(x) + _GAMMA) & _MASK
        z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
        z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
        return z ^ (z >> np.uint64(31))
    finally:
        np.seterr(**old)


def key_mix(seed: int, stream: int, a, b=0):
    """64-bit key for draw (a, b) in a tagged stream; vectorized over a, b."""
    h = splitmix64(np.uint64(seed))
    h = splitmix64(h ^ np.uint64(stream))
    h = splitmix64(h ^ np.asarray(a, dtype=np.uint64))
    h = splitmix64(h ^ np.asarray(b, dtype=np.uint64))
    return h


def uniform01(keys) -> np.ndarray:
    """Map 64-bit keys to uniforms in [0, 1) using the top 53 bits."""
    bits = np.asarray(keys, dtype=np.uint64) >> np.uint64(11)
    return bits.astype(np.float64) * (1.0 / (1 << 53))


def derive_seed(seed: int, stream: int, a: int = 0, b: int = 0) -> int:
    """A derived 64-bit sub-seed, usable to key an independent stream."""
    return int(key_mix(seed, stream, a, b))
