"""
Weight initialization.

Families that pass through relu_clamp start nonnegative, otherwise half of
them would be silenced at step 0. Everything else is Glorot-uniform.
"""

import numpy as np


def glorot_bound(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    bound = glorot_bound(shape[1], shape[0])
    return rng.uniform(-bound, bound, size=shape)


def nonnegative_uniform(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    return rng.uniform(0.0, glorot_bound(shape[1], shape[0]), size=shape)
