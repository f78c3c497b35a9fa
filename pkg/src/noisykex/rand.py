"""Randomness plumbing: explicit ``numpy.random.Generator`` sources.

Every randomized function in the package takes a generator argument. Exponents
are arbitrary-precision ints, so uniform sampling below a bound is done here
by rejection over raw bytes rather than through ``Generator.integers``.
"""

from __future__ import annotations

import secrets

import numpy as np


def make_rng(seed: int | None = None) -> np.random.Generator:
    """Seeded generator, or one keyed from the OS CSPRNG when ``seed`` is None."""
    if seed is None:
        seed = secrets.randbits(256)
    return np.random.default_rng(seed)


def spawn(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Independent child streams, one per trial."""
    return [np.random.default_rng(s) for s in rng.bit_generator.seed_seq.spawn(count)]


def randbelow(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in ``[0, bound)``."""
    if bound < 1:
        raise ValueError("bound must be positive")
    if bound <= 1 << 62:
        return int(rng.integers(0, bound))
    bits = (bound - 1).bit_length()
    n_bytes = (bits + 7) // 8
    excess = 8 * n_bytes - bits
    while True:
        value = int.from_bytes(rng.bytes(n_bytes), "little") >> excess
        if value < bound:
            return value


def randint(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform integer in the closed interval ``[low, high]``."""
    if high < low:
        raise ValueError(f"empty range [{low}, {high}]")
    return low + randbelow(rng, high - low + 1)
