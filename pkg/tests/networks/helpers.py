import numpy as np


def jensen_violation(h, rng, dim: int, samples: int = 10_000, scale: float = 2.0, fixed=None) -> float:
    """
    Largest excess of h(lam x1 + (1 - lam) x2) over lam h(x1) + (1 - lam) h(x2).

    With `fixed`, those leading coordinates are held at the given values and
    only the trailing `dim` coordinates are mixed.
    """
    x1 = scale * rng.standard_normal((samples, dim))
    x2 = scale * rng.standard_normal((samples, dim))
    lam = rng.uniform(0.0, 1.0, size=(samples, 1))
    mid = lam * x1 + (1.0 - lam) * x2
    if fixed is not None:
        prefix = np.tile(np.asarray(fixed, dtype=np.float64), (samples, 1))
        x1, x2, mid = (np.hstack([prefix, part]) for part in (x1, x2, mid))
    h1, h2, hm = h(x1), h(x2), h(mid)
    chord = lam[:, 0] * h1 + (1.0 - lam[:, 0]) * h2
    slack = 1e-9 * (1.0 + np.maximum(np.abs(h1), np.abs(h2)))
    return float(np.max(hm - chord - slack))


def perturbed(params, rng, scale: float = 0.5):
    """Same structure, every weight moved by Gaussian noise so biases and negative mixing weights matter."""
    return params.with_weights({name: value + scale * rng.standard_normal(value.shape) for name, value in params.weights.items()})


def segment_profile(h, start, end, points: int = 2001, prefix=None) -> np.ndarray:
    """h sampled at evenly spaced points of the segment [start, end]."""
    t = np.linspace(0.0, 1.0, points)[:, None]
    X = start + t * (end - start)
    if prefix is not None:
        X = np.hstack([np.tile(np.asarray(prefix, dtype=np.float64), (points, 1)), X])
    return h(X)


def second_differences(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Second differences and the roundoff tolerance they are judged against."""
    return np.diff(values, n=2), 1e-9 * (1.0 + float(np.max(np.abs(values))))


def kink_count(values: np.ndarray) -> int:
    """Runs of positive second differences; each run holds at least one slope change."""
    second, tolerance = second_differences(values)
    bent = np.r_[False, second > tolerance]
    return int(np.count_nonzero(bent[1:] & ~bent[:-1]))
