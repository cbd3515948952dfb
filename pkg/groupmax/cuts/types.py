from dataclasses import dataclass
from typing import Optional

import numpy as np

from groupmax.diffcore.linalg import FLOAT, as_batch
from groupmax.utils.errors import ShapeMismatchError, StructuralError


@dataclass(frozen=True, eq=False)
class Cut:
    """One affine function y -> slope . y + intercept."""

    slope: np.ndarray
    intercept: float

    def __post_init__(self):
        slope = np.array(self.slope, dtype=FLOAT).reshape(-1)
        if slope.size < 1 or not np.all(np.isfinite(slope)) or not np.isfinite(self.intercept):
            raise StructuralError("a cut needs a nonempty finite slope and a finite intercept")
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "intercept", float(self.intercept))

    @property
    def dimension(self) -> int:
        return int(self.slope.shape[0])

    def __call__(self, x) -> float:
        point = np.asarray(x, dtype=FLOAT).reshape(-1)
        if point.shape[0] != self.dimension:
            raise ShapeMismatchError(f"point has dimension {point.shape[0]}, cut has {self.dimension}")
        return float(point @ self.slope + self.intercept)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cut):
            return NotImplemented
        return np.array_equal(self.slope, other.slope) and self.intercept == other.intercept

    def __repr__(self) -> str:
        return f"Cut(slope={self.slope.tolist()}, intercept={self.intercept!r})"


class CutSet:
    """
    A finite max-affine function, stored as an (N, dim) slope matrix and N intercepts.

    Provenance: the hash of the model the cuts came from and, for conditional
    cut sets, the frozen x_tilde. Equality compares the cuts and x_tilde bit
    for bit; the model hash is not part of the cut file, so it is ignored.
    """

    def __init__(
        self,
        slopes,
        intercepts,
        model_hash: Optional[str] = None,
        x_tilde=None,
        enumerated_count: Optional[int] = None,
    ):
        slopes = np.array(slopes, dtype=FLOAT)
        intercepts = np.array(intercepts, dtype=FLOAT).reshape(-1)
        if slopes.ndim != 2 or slopes.shape[0] < 1 or slopes.shape[1] < 1:
            raise StructuralError(f"a cut set needs at least one cut of dimension >= 1, got slopes {slopes.shape}")
        if intercepts.shape != (slopes.shape[0],):
            raise ShapeMismatchError(f"{slopes.shape[0]} slopes but {intercepts.shape[0]} intercepts")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(intercepts))):
            raise StructuralError("cut set has non-finite entries")
        self.slopes = slopes
        self.intercepts = intercepts
        self.model_hash = model_hash
        self.x_tilde = None if x_tilde is None else np.array(x_tilde, dtype=FLOAT).reshape(-1)
        # size before deduplication, when the set came out of an enumeration
        self.enumerated_count = enumerated_count if enumerated_count is not None else len(intercepts)

    @classmethod
    def from_cuts(cls, cuts: list[Cut], **provenance) -> "CutSet":
        if not cuts:
            raise StructuralError("a cut set needs at least one cut")
        dims = {cut.dimension for cut in cuts}
        if len(dims) != 1:
            raise ShapeMismatchError(f"cuts have mixed dimensions {sorted(dims)}")
        return cls(np.stack([cut.slope for cut in cuts]), [cut.intercept for cut in cuts], **provenance)

    @property
    def dimension(self) -> int:
        return int(self.slopes.shape[1])

    @property
    def is_conditional(self) -> bool:
        return self.x_tilde is not None

    @property
    def cuts(self) -> list[Cut]:
        return [Cut(slope, intercept) for slope, intercept in zip(self.slopes, self.intercepts)]

    def __len__(self) -> int:
        return int(self.intercepts.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CutSet):
            return NotImplemented
        same_condition = (self.x_tilde is None and other.x_tilde is None) or (
            self.x_tilde is not None and other.x_tilde is not None and np.array_equal(self.x_tilde, other.x_tilde)
        )
        return (
            same_condition
            and self.slopes.shape == other.slopes.shape
            and np.array_equal(self.slopes, other.slopes)
            and np.array_equal(self.intercepts, other.intercepts)
        )

    def __repr__(self) -> str:
        condition = f", x_tilde={self.x_tilde.tolist()}" if self.is_conditional else ""
        return f"CutSet(n={len(self)}, dim={self.dimension}{condition})"


def eval_cutset(c: CutSet, x) -> np.ndarray | float:
    """max over cuts of slope . x + intercept; a float for one point, an array for a batch."""
    if np.ndim(x) > 1 or (np.ndim(x) == 1 and c.dimension == 1 and np.size(x) > 1):
        X = as_batch(x, c.dimension, name="point")
        return np.max(X @ c.slopes.T + c.intercepts, axis=1)
    point = np.asarray(x, dtype=FLOAT).reshape(-1)
    if point.shape[0] != c.dimension:
        raise ShapeMismatchError(f"point has dimension {point.shape[0]}, cut set has {c.dimension}")
    return float(np.max(c.slopes @ point + c.intercepts))
