"""Counter-based pseudo-random numbers (SplitMix64).

Every stochastic artifact in the package (weight init, noise fields, batch
shuffling, expert-pair draws) is derived from SplitMix64 applied to explicit
64-bit counters. Output therefore depends only on the integer key material,
never on call order, platform, or numpy version.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64
_TWO53 = float(1 << 53)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _M1
    z = (z ^ (z >> _U64(27))) * _M2
    return z ^ (z >> _U64(31))


def mix_key(*parts: int) -> int:
    """Fold integer parts into one 64-bit key, order-sensitively."""
    with np.errstate(over="ignore"):
        z = _U64(0)
        for p in parts:
            z = _mix((z + _GAMMA) ^ _U64(int(p) & 0xFFFFFFFFFFFFFFFF))
    return int(z)


def random_u64(key: int, count: int, offset: int = 0) -> np.ndarray:
    """`count` SplitMix64 words for counters offset..offset+count-1."""
    counters = np.arange(offset, offset + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix((counters + _U64(1)) * _GAMMA + _U64(key))


def uniforms(key: int, count: int, offset: int = 0) -> np.ndarray:
    """Uniform float64 samples in [0, 1)."""
    return (random_u64(key, count, offset) >> _U64(11)).astype(np.float64) / _TWO53


def normals(key: int, count: int, offset: int = 0) -> np.ndarray:
    """Standard normal samples via Box-Muller on paired uniforms."""
    n = count + (count % 2)
    u = uniforms(key, 2 * n, offset)
    u1 = np.maximum(u[:n], 1e-300)
    u2 = u[n:]
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * n)
    out[0::2] = r * np.cos(2.0 * np.pi * u2)
    out[1::2] = r * np.sin(2.0 * np.pi * u2)
    return out[:count]


def permutation(key: int, n: int) -> np.ndarray:
    """Deterministic permutation of range(n): argsort of random keys."""
    return np.argsort(random_u64(key, n), kind="stable")


def choose_pair(key: int, n: int) -> tuple[int, int]:
    """Two distinct indices from range(n), uniform over ordered pairs."""
    if n < 2:
        raise ValueError("need at least two items to draw a pair")
    u = uniforms(key, 2)
    i = int(u[0] * n)
    j = int(u[1] * (n - 1))
    if j >= i:
        j += 1
    return i, j
