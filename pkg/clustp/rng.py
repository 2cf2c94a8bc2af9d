"""
Seeded random streams.

Every run draws from ``numpy.random.Generator(PCG64(seed))``. Trial ``t`` of
an experiment with master seed ``m`` uses ``m XOR splitmix64(t)``, so a trial's
stream depends only on its index and the master seed, never on scheduling.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    return (master_seed ^ splitmix64(trial)) & MASK64


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))
