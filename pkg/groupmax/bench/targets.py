"""
Benchmark target functions f1..f10.

Points are rows of a batch. For the partially convex targets the convex
coordinates come last, matching the input layout of the partial networks.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Optional

import numpy as np
from pydantic import Field

from groupmax.config.settings import settings
from groupmax.diffcore.linalg import as_batch
from groupmax.schemas.base import GroupMaxBaseModel
from groupmax.utils.errors import StructuralError, UnknownIdentifierError
from groupmax.utils.logging import get_logger

logger = get_logger()

F10_FEATURES = 376
F10_CONVEX = 17


class SPDSpec(GroupMaxBaseModel):
    dimension: int = Field(ge=1)
    seed: int = Field(default=1234, ge=0)


@lru_cache(maxsize=64)
def _spd(dimension: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    B = rng.standard_normal((dimension, dimension))
    A = B.T @ B / dimension + 0.1 * np.eye(dimension)
    A = 0.5 * (A + A.T)
    A.setflags(write=False)
    return A


def make_spd(spec: SPDSpec) -> np.ndarray:
    """A = B^T B / d + 0.1 I with B standard normal from the seed; symmetric, eigenvalues >= 0.1."""
    return _spd(spec.dimension, spec.seed).copy()


@dataclass(frozen=True)
class TargetFunction:
    function_id: str
    dimension: int
    convex_dim: int
    fn: Callable[[np.ndarray], np.ndarray]

    @property
    def is_partial(self) -> bool:
        return self.convex_dim < self.dimension

    def __call__(self, X) -> np.ndarray:
        X = as_batch(X, self.dimension, name=f"{self.function_id} input")
        return self.fn(X)


def _f1(X):
    return X[:, 0] ** 2


def _f2(X):
    x = X[:, 0]
    # expm1 only sees the negative branch, so large x never overflows
    return x**2 + 10.0 * np.where(x < 0, np.expm1(np.minimum(x, 0.0)), x)


def _f3(X):
    return (X[:, 0] ** 2 + 1.0) ** 2


def _f4(X):
    x = X[:, 0]
    return np.maximum(np.abs(x), (x**2 - 3.0) / 2.0)


def _f5(X):
    x, y = X[:, 0], X[:, 1]
    return y**2 * np.abs(x + 2.0 * x**3)


def _f6(X):
    x, y = X[:, 0], X[:, 1]
    return (1.0 + np.abs(y)) * np.abs(x + 2.0 * x**3)


def _f7(X):
    x, y = X[:, 0], X[:, 1]
    return np.maximum(y, 0.0) * np.abs(x) + x**2


def _f8(X):
    return np.sum(X * X, axis=1)


def _fixed(function_id: str, fn, dimension: int, convex_dim: int):
    def factory(requested: Optional[int] = None, requested_convex: Optional[int] = None) -> TargetFunction:
        if requested is not None and requested != dimension:
            raise StructuralError(f"{function_id} takes {dimension} inputs, got dimension {requested}")
        if requested_convex is not None and requested_convex != convex_dim:
            raise StructuralError(f"{function_id} is convex in {convex_dim} coordinates, got {requested_convex}")
        return TargetFunction(function_id, dimension, convex_dim, fn)

    return factory


def create_f8(dimension: Optional[int] = None, convex_dim: Optional[int] = None) -> TargetFunction:
    d = dimension or 2
    if convex_dim is not None and convex_dim != d:
        raise StructuralError(f"f8 is convex in all {d} coordinates, got convex_dim {convex_dim}")
    return TargetFunction("f8", d, d, _f8)


def create_f9(dimension: Optional[int] = None, convex_dim: Optional[int] = None) -> TargetFunction:
    d = dimension or 2
    if convex_dim is not None and convex_dim != d:
        raise StructuralError(f"f9 is convex in all {d} coordinates, got convex_dim {convex_dim}")
    A = _spd(d, settings.SPD_SEED)

    def f9(X):
        return np.sum(np.abs(X) + np.abs(1.0 - X), axis=1) + np.einsum("bi,ij,bj->b", X, A, X)

    return TargetFunction("f9", d, d, f9)


def create_f10(dimension: Optional[int] = None, convex_dim: Optional[int] = None) -> TargetFunction:
    """f10(x, y) = -x.x / (2n) + y.y / (2m), convex in the trailing m coordinates."""
    m = convex_dim or F10_CONVEX
    n = (dimension - m) if dimension is not None else F10_FEATURES
    if n < 1 or m < 1:
        raise StructuralError(f"f10 needs n >= 1 and m >= 1, got n={n}, m={m}")

    def f10(X):
        x, y = X[:, :n], X[:, n:]
        return -np.sum(x * x, axis=1) / (2.0 * n) + np.sum(y * y, axis=1) / (2.0 * m)

    return TargetFunction("f10", n + m, m, f10)


TargetFactory = Callable[[Optional[int], Optional[int]], TargetFunction]


class TargetRegistry:
    """Registry for benchmark target functions"""

    _factories: Dict[str, TargetFactory] = {
        "f1": _fixed("f1", _f1, 1, 1),
        "f2": _fixed("f2", _f2, 1, 1),
        "f3": _fixed("f3", _f3, 1, 1),
        "f4": _fixed("f4", _f4, 1, 1),
        "f5": _fixed("f5", _f5, 2, 1),
        "f6": _fixed("f6", _f6, 2, 1),
        "f7": _fixed("f7", _f7, 2, 1),
        "f8": create_f8,
        "f9": create_f9,
        "f10": create_f10,
    }

    @classmethod
    def create_target(
        cls,
        function_id: str,
        dimension: Optional[int] = None,
        convex_dim: Optional[int] = None,
    ) -> TargetFunction:
        """Create the target for a function id, sized to the requested dimensions"""
        factory = cls._factories.get(function_id)
        if factory is None:
            raise UnknownIdentifierError("function", function_id, cls.list_registered_ids())
        return factory(dimension, convex_dim)

    @classmethod
    def register_target(cls, function_id: str, factory: TargetFactory):
        """Register a custom target factory"""
        cls._factories[function_id] = factory
        logger.info(f"Registered factory for target function: {function_id}")

    @classmethod
    def list_registered_ids(cls) -> list:
        """List all registered function ids"""
        return list(cls._factories.keys())

    @classmethod
    def is_registered(cls, function_id: str) -> bool:
        """Check if function id is registered"""
        return function_id in cls._factories


def target_eval(function_id: str, point, dimension: Optional[int] = None, convex_dim: Optional[int] = None) -> float:
    """f(point) for a single point."""
    point = np.atleast_1d(np.asarray(point, dtype=np.float64))
    if dimension is None and function_id in ("f8", "f9"):
        dimension = point.shape[0]
    target = TargetRegistry.create_target(function_id, dimension, convex_dim)
    if point.shape[0] != target.dimension:
        raise StructuralError(f"{function_id} takes {target.dimension} inputs, point has {point.shape[0]}")
    return float(target(point.reshape(1, -1))[0])
