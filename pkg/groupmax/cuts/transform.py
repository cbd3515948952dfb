import numpy as np

from groupmax.training.normalizer import Normalizer
from groupmax.utils.errors import NormalizationError, ShapeMismatchError

from .types import Cut, CutSet


def _scales(norm: Normalizer, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    if norm.dimension != dimension:
        raise ShapeMismatchError(f"normalizer covers {norm.dimension} coordinates, cut has {dimension}")
    if np.any(norm.sigma <= 0) or norm.output_std <= 0:
        raise NormalizationError("cannot denormalize through a zero scale")
    return norm.mu, norm.sigma


def denormalize_cut(c: Cut, norm: Normalizer) -> Cut:
    """
    Map a cut learned on x' = (x - mu) / sigma, h' = (h - mu_h) / sigma_h back to x and h.

    slope_i <- sigma_h * slope_i / sigma_i
    intercept <- sigma_h * (intercept - sum_i slope_i * mu_i / sigma_i) + mu_h
    """
    mu, sigma = _scales(norm, c.dimension)
    scaled = c.slope / sigma
    return Cut(
        slope=norm.output_std * scaled,
        intercept=norm.output_std * (c.intercept - float(scaled @ mu)) + norm.output_mean,
    )


def denormalize_cutset(cuts: CutSet, norm: Normalizer) -> CutSet:
    mu, sigma = _scales(norm, cuts.dimension)
    scaled = cuts.slopes / sigma
    return CutSet(
        norm.output_std * scaled,
        norm.output_std * (cuts.intercepts - scaled @ mu) + norm.output_mean,
        model_hash=cuts.model_hash,
        x_tilde=cuts.x_tilde,
        enumerated_count=cuts.enumerated_count,
    )
