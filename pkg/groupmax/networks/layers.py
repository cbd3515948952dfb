from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ConvexLayer:
    """
    One layer of a max-of-affine network, written as a function of its convex input y.

    Neuron n computes ``slopes[n] . y + intercepts[n] + sum_g mix[n, g] * z_g``,
    where z_g are the group outputs of the previous layer and ``mix >= 0``.
    The layer then takes a max over contiguous groups of ``group_size`` neurons,
    or over all neurons when ``group_size`` is None (the output layer).
    """

    slopes: np.ndarray
    intercepts: np.ndarray
    mix: Optional[np.ndarray]
    group_size: Optional[int]

    @property
    def width(self) -> int:
        return int(self.intercepts.shape[0])
