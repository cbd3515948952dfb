from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from groupmax.utils.errors import StructuralError
from groupmax.utils.logging import get_logger

logger = get_logger()

Params = dict[str, np.ndarray]
# f(theta) -> (value, analytic gradients, smallest max/clamp margin)
ParametricScalar = Callable[[Params], tuple[float, Params, float]]

MAX_RETRIES = 10


@dataclass
class GradCheckResult:
    max_relative_error: float
    checked: int
    skipped: list[tuple[str, int]] = field(default_factory=list)
    worst: Optional[tuple[str, int]] = None


def _perturbed(theta: Params, rng: np.random.Generator, scale: float) -> Params:
    return {name: value + scale * rng.standard_normal(value.shape) for name, value in theta.items()}


def finite_diff_check(
    f: ParametricScalar,
    theta: Params,
    h: float = 1e-5,
    rng: Optional[np.random.Generator] = None,
    perturbation: float = 1e-3,
) -> GradCheckResult:
    """
    Compare analytic gradients against central differences, coordinate by coordinate.

    When the smallest max/clamp margin is below 10h the whole parameter set
    is nudged and the coordinate retried; after 10 retries it is skipped.
    """
    if h <= 0:
        raise StructuralError(f"finite difference step must be positive, got {h}")
    rng = rng if rng is not None else np.random.default_rng(0)

    current = {name: np.array(value, dtype=np.float64) for name, value in theta.items()}
    _, grads, gap = f(current)
    result = GradCheckResult(max_relative_error=0.0, checked=0)

    for name in sorted(current):
        for flat_index in range(current[name].size):
            retries = 0
            while gap < 10 * h and retries < MAX_RETRIES:
                current = _perturbed(current, rng, perturbation)
                _, grads, gap = f(current)
                retries += 1
            if gap < 10 * h:
                result.skipped.append((name, flat_index))
                continue

            plus = {key: value.copy() for key, value in current.items()}
            minus = {key: value.copy() for key, value in current.items()}
            plus[name].flat[flat_index] += h
            minus[name].flat[flat_index] -= h
            f_plus, _, _ = f(plus)
            f_minus, _, _ = f(minus)

            numeric = (f_plus - f_minus) / (2 * h)
            analytic = float(grads[name].flat[flat_index])
            error = abs(analytic - numeric) / max(1.0, abs(analytic))
            result.checked += 1
            if error > result.max_relative_error:
                result.max_relative_error = error
                result.worst = (name, flat_index)

    if result.skipped:
        logger.warning(f"Gradient check skipped {len(result.skipped)} coordinates on persistent ties")
    return result
