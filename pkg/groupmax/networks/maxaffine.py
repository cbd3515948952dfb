from typing import ClassVar

import numpy as np

from groupmax.diffcore import Node, Tape

from .base import NetworkParams
from .init import glorot_uniform
from .layers import ConvexLayer


class MaxAffineParams(NetworkParams):
    """h(x) = max_i (A_i . x + b_i) over N cuts."""

    kind: ClassVar[str] = "maxaffine"

    d: int
    n_cuts: int

    @property
    def input_dim(self) -> int:
        return self.d

    @property
    def cut_count(self) -> int:
        return self.n_cuts

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        return {"A": (self.n_cuts, self.d), "b": (self.n_cuts,)}

    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        x = tape.leaf("x", X)
        w = self.bind(tape)
        return tape.global_max(tape.affine(w["A"], w["b"], x))

    def convex_layers(self) -> list[ConvexLayer]:
        return [ConvexLayer(slopes=self.weights["A"], intercepts=self.weights["b"], mix=None, group_size=None)]


def build_maxaffine(d: int, n_cuts: int, seed: int = 0) -> MaxAffineParams:
    if n_cuts < 1:
        raise ValueError(f"a max-affine network needs at least one cut, got {n_cuts}")
    rng = np.random.default_rng(seed)
    # spread intercepts so no two cuts start tied
    weights = {"A": glorot_uniform(rng, (n_cuts, d)), "b": rng.uniform(-1.0, 1.0, size=n_cuts)}
    return MaxAffineParams(d=d, n_cuts=n_cuts, weights=weights)


def forward_maxaffine(p: MaxAffineParams, x) -> tuple[float, Tape]:
    return p.forward_point(x)
