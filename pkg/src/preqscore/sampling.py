"""Seeded random generation with exact inversion samplers.

Reproducibility policy: every stream is a numpy PCG64 generator and only
``Generator.random()`` (uniform doubles) is consumed, so draws are
bit-identical across platforms for a fixed seed.  Substreams (one per
replicate) are derived from a master seed with a splitmix64 mix, so any
replicate is reproducible in isolation.

Both samplers invert the exact cumulative pmf by sequential search from
x = 0, which is exact and fast at the mean scales used here (around 10).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["sample_negbin", "sample_poisson", "substream_seed"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def substream_seed(master_seed: int, index: int) -> int:
    """The index-th output of a splitmix64 stream seeded at master_seed.

    Used to give each replicate its own independent, individually
    reproducible generator seed.
    """
    if isinstance(index, bool) or not isinstance(index, int) or index < 0:
        raise ValueError(f"index must be a non-negative integer, got {index!r}")
    z = (int(master_seed) + (index + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def sample_poisson(rate: float, rng: np.random.Generator) -> int:
    """Exact Poisson draw by inversion: sequential search from x = 0.

    Consumes exactly one uniform.  The rate must be small enough that
    exp(-rate) does not underflow (rate below roughly 700).
    """
    rate = float(rate)
    if not math.isfinite(rate) or rate <= 0.0:
        raise ValueError(f"rate must be positive and finite, got {rate}")
    p = math.exp(-rate)
    if p == 0.0:
        raise ValueError(f"rate {rate} too large for inversion sampling (pmf underflows)")
    u = rng.random()
    cdf = p
    x = 0
    while u > cdf:
        x += 1
        p *= rate / x
        cdf += p
        if p == 0.0:
            break  # float underflow: remaining tail mass is below resolution
    return x


def sample_negbin(s: float, theta: float, rng: np.random.Generator) -> int:
    """Exact Negative Binomial draw (size s, success probability theta).

    Inverts the cumulative pmf computed via the recurrence
    p(x+1) = p(x) * theta * (s + x) / (x + 1), starting from
    p(0) = (1 - theta)^s.  Consumes exactly one uniform.
    """
    s = float(s)
    theta = float(theta)
    if not math.isfinite(s) or s <= 0.0:
        raise ValueError(f"size s must be positive and finite, got {s}")
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie strictly between 0 and 1, got {theta}")
    p = (1.0 - theta) ** s
    if p == 0.0:
        raise ValueError(f"parameters (s={s}, theta={theta}) too extreme for inversion sampling")
    u = rng.random()
    cdf = p
    x = 0
    while u > cdf:
        p *= theta * (s + x) / (x + 1.0)
        x += 1
        cdf += p
        if p == 0.0:
            break
    return x
