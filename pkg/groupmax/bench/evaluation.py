from typing import Callable, Optional

import numpy as np

from groupmax.config.settings import settings
from groupmax.schemas.training_schemas import SamplerSpec
from groupmax.training import sample_batch

Predictor = Callable[[np.ndarray], np.ndarray]


def as_predictor(model) -> Predictor:
    """FittedModel.predict, NetworkParams.evaluate, or any batch callable."""
    for attribute in ("predict", "evaluate"):
        method = getattr(model, attribute, None)
        if callable(method):
            return method
    if callable(model):
        return model
    raise TypeError(f"cannot evaluate an object of type {type(model).__name__}")


def mc_mse(
    model,
    target: Predictor,
    sampler: SamplerSpec,
    n: Optional[int] = None,
    eval_seed: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> float:
    """
    Monte Carlo estimate of E[(f(X) - h(X))^2] on noiseless targets.

    Points are drawn in chunks from one generator seeded by ``eval_seed``, so
    the estimate only depends on the seed and n.
    """
    n = settings.EVAL_SAMPLES if n is None else n
    if n < 1:
        raise ValueError(f"Monte Carlo evaluation needs at least one sample, got {n}")
    eval_seed = settings.EVAL_SEED if eval_seed is None else eval_seed
    chunk_size = settings.EVAL_CHUNK_SIZE if chunk_size is None else chunk_size

    predict = as_predictor(model)
    rng = np.random.default_rng(eval_seed)
    total = 0.0
    remaining = n
    while remaining > 0:
        size = min(chunk_size, remaining)
        X = sample_batch(sampler, size, rng)
        residual = np.asarray(target(X)).reshape(-1) - np.asarray(predict(X)).reshape(-1)
        total += float(np.dot(residual, residual))
        remaining -= size
    return total / n
