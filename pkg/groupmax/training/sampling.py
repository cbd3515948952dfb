import numpy as np

from groupmax.schemas.training_schemas import SamplerSpec

SeedLike = int | np.random.SeedSequence | np.random.Generator


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_batch(spec: SamplerSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. points of the sampler's law, shape (n, dimension)."""
    if n < 1:
        raise ValueError(f"batch size must be at least 1, got {n}")
    shape = (n, spec.dimension)
    if spec.kind == "gaussian":
        return spec.mean + spec.std * rng.standard_normal(shape)
    return rng.uniform(spec.lo, spec.hi, size=shape)
