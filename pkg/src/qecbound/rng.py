"""Counter-based reproducible random numbers.

Every draw is a pure function of (seed, path...), so Monte-Carlo loops can
be reordered or parallelized without changing any sampled value, and runs
are bit-identical across platforms (pure integer arithmetic, no stateful
generator).
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _mix(seed: int, path) -> int:
    h = _splitmix64(seed & _MASK)
    for v in path:
        h = _splitmix64(h ^ (int(v) & _MASK))
    return h


def uniform(seed: int, *path: int) -> float:
    """Uniform draw in (0, 1] keyed by (seed, *path)."""
    return ((_mix(seed, path) >> 11) + 1) * 2.0**-53


def gaussian(seed: int, *path: int, mean: float = 0.0, std: float = 1.0) -> float:
    """Standard Box-Muller normal keyed by (seed, *path)."""
    u1 = uniform(seed, *path, 0)
    u2 = uniform(seed, *path, 1)
    n = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
    return mean + std * n
