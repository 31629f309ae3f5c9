"""Deterministic seed derivation and random generators.

Per-sample seeds are derived from a master seed with SplitMix64 (Vigna's
generator, the one used to seed xoshiro). Each derived 64-bit seed keys a
counter-based numpy Philox bit generator, so ensembles are reproducible
across platforms and independent of execution order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One SplitMix64 output for the given 64-bit state."""
    z = (state + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master_seed: int, *indices: int) -> int:
    """Fold integer indices into a master seed, one SplitMix64 step each."""
    state = splitmix64(master_seed & _MASK64)
    for idx in indices:
        state = splitmix64(state ^ ((idx + _GOLDEN) & _MASK64))
    return state


def generator(seed: int) -> np.random.Generator:
    """Counter-based generator for a derived 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
