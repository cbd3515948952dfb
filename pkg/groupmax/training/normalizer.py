from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import Field, model_validator

from groupmax.config.settings import settings
from groupmax.schemas.base import GroupMaxBaseModel
from groupmax.schemas.training_schemas import SamplerSpec
from groupmax.utils.errors import NormalizationError, StructuralError
from groupmax.utils.logging import get_logger

from .sampling import SeedLike, make_rng, sample_batch

logger = get_logger()

Target = Callable[[np.ndarray], np.ndarray]

DEGENERATE_RELATIVE_STD = 1e-12


class Normalizer(GroupMaxBaseModel):
    """
    Affine standardization of inputs and outputs.

    The network sees x' = (x - input_mean) / input_std and is trained on
    h' = (h - output_mean) / output_std.
    """

    input_mean: list[float]
    input_std: list[float]
    output_mean: float = 0.0
    output_std: float = 1.0
    sample_size: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_scales(self) -> "Normalizer":
        if len(self.input_mean) != len(self.input_std) or not self.input_mean:
            raise StructuralError("normalizer input mean and std must have the same nonzero length")
        if min(self.input_std) <= 0 or self.output_std <= 0:
            raise NormalizationError(
                f"normalizer scales must be positive (input std {self.input_std}, output std {self.output_std})"
            )
        return self

    @classmethod
    def identity(cls, dimension: int) -> "Normalizer":
        return cls(input_mean=[0.0] * dimension, input_std=[1.0] * dimension)

    @property
    def dimension(self) -> int:
        return len(self.input_mean)

    @property
    def mu(self) -> np.ndarray:
        return np.asarray(self.input_mean, dtype=np.float64)

    @property
    def sigma(self) -> np.ndarray:
        return np.asarray(self.input_std, dtype=np.float64)

    def normalize_inputs(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mu) / self.sigma

    def normalize_targets(self, values) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.output_mean) / self.output_std

    def denormalize_outputs(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.float64) * self.output_std + self.output_mean

    def restrict(self, indices: Sequence[int] | slice) -> "Normalizer":
        """The same normalizer seen on a subset of the input coordinates."""
        keep = np.arange(self.dimension)[indices]
        return self.model_copy(
            update={
                "input_mean": [self.input_mean[i] for i in keep],
                "input_std": [self.input_std[i] for i in keep],
            }
        )


def _check_spread(name: str, mean: float, std: float):
    if not std > DEGENERATE_RELATIVE_STD * max(1.0, abs(mean)):
        raise NormalizationError(f"{name} has zero empirical standard deviation (mean {mean:g}, std {std:g})")


def make_normalizer(
    sampler: SamplerSpec,
    target: Target,
    noise_std: float = 0.0,
    n: Optional[int] = None,
    seed: SeedLike = 0,
) -> Normalizer:
    """Empirical means and standard deviations of inputs and noisy targets over n pre-samples."""
    n = settings.NORMALIZER_SAMPLES if n is None else n
    if n < 2:
        raise ValueError(f"normalizer needs at least 2 samples, got {n}")
    rng = make_rng(seed)
    X = sample_batch(sampler, n, rng)
    values = np.asarray(target(X), dtype=np.float64).reshape(-1)
    if noise_std > 0:
        values = values + noise_std * rng.standard_normal(n)

    input_mean, input_std = X.mean(axis=0), X.std(axis=0)
    output_mean, output_std = float(values.mean()), float(values.std())
    for i, (mean, std) in enumerate(zip(input_mean, input_std)):
        _check_spread(f"input coordinate {i}", float(mean), float(std))
    _check_spread("target", output_mean, output_std)

    logger.debug(f"Normalizer from {n} samples: output mean {output_mean:.6g}, std {output_std:.6g}")
    return Normalizer(
        input_mean=input_mean.tolist(),
        input_std=input_std.tolist(),
        output_mean=output_mean,
        output_std=output_std,
        sample_size=n,
    )
