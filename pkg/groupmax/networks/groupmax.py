from typing import ClassVar

import numpy as np
from pydantic import field_validator

from groupmax.diffcore import Node, Tape
from groupmax.diffcore.linalg import check_groups
from groupmax.utils.logging import get_logger

from .base import NetworkParams
from .init import glorot_uniform, nonnegative_uniform
from .layers import ConvexLayer
from .maxaffine import MaxAffineParams

logger = get_logger()


class GroupMaxParams(NetworkParams):
    """
    Fully convex GroupMax network.

    z^1 = rho(A^1 x + B^1), z^i = rho((A^i)^+ z^{i-1} + B^i) for 1 < i < q and
    h(x) = max((A^q)^+ z^{q-1} + B^q), where rho is the max over contiguous
    groups of G neurons. Layer q feeds the global max, so only M_1..M_{q-1}
    must be divisible by G.
    """

    kind: ClassVar[str] = "groupmax"

    d: int
    widths: tuple[int, ...]
    group_size: int

    @field_validator("widths")
    @classmethod
    def check_widths(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("a GroupMax network needs at least one layer")
        return value

    @property
    def input_dim(self) -> int:
        return self.d

    @property
    def depth(self) -> int:
        return len(self.widths)

    def group_counts(self) -> list[int]:
        """K_j = M_j / G for every layer feeding a group max."""
        return [check_groups(width, self.group_size) for width in self.widths[:-1]]

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        shapes = {"A1": (self.widths[0], self.d), "B1": (self.widths[0],)}
        for j, (width, groups) in enumerate(zip(self.widths[1:], self.group_counts()), start=2):
            shapes[f"A{j}"] = (width, groups)
            shapes[f"B{j}"] = (width,)
        return shapes

    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        x = tape.leaf("x", X)
        w = self.bind(tape)
        q = self.depth

        if q == 1:
            return tape.global_max(tape.affine(w["A1"], w["B1"], x))

        z = tape.group_max(tape.affine(w["A1"], w["B1"], x), self.group_size)
        for j in range(2, q):
            z = tape.group_max(tape.affine(tape.relu_clamp(w[f"A{j}"]), w[f"B{j}"], z), self.group_size)
        return tape.global_max(tape.affine(tape.relu_clamp(w[f"A{q}"]), w[f"B{q}"], z))

    def convex_layers(self) -> list[ConvexLayer]:
        q = self.depth
        layers = [
            ConvexLayer(
                slopes=self.weights["A1"],
                intercepts=self.weights["B1"],
                mix=None,
                group_size=self.group_size if q > 1 else None,
            )
        ]
        for j in range(2, q + 1):
            width = self.widths[j - 1]
            layers.append(
                ConvexLayer(
                    slopes=np.zeros((width, self.d)),
                    intercepts=self.weights[f"B{j}"],
                    mix=np.maximum(self.weights[f"A{j}"], 0.0),
                    group_size=self.group_size if j < q else None,
                )
            )
        return layers


def build_groupmax(d: int, widths, group_size: int, seed: int = 0) -> GroupMaxParams:
    """
    Random GroupMax network.

    A^1 ~ U(-s, s) with s = sqrt(6 / (d + M_1)); A^j ~ U(0, sqrt(6 / (K_{j-1} + M_j)))
    for j >= 2 so every clamped weight starts active; biases are zero.
    """
    widths = tuple(int(width) for width in widths)
    if not widths:
        raise ValueError("a GroupMax network needs at least one layer")
    groups = [check_groups(width, group_size) for width in widths[:-1]]

    rng = np.random.default_rng(seed)
    weights = {"A1": glorot_uniform(rng, (widths[0], d)), "B1": np.zeros(widths[0])}
    for j, (width, fan_in) in enumerate(zip(widths[1:], groups), start=2):
        weights[f"A{j}"] = nonnegative_uniform(rng, (width, fan_in))
        weights[f"B{j}"] = np.zeros(width)

    params = GroupMaxParams(d=d, widths=widths, group_size=group_size, weights=weights)
    logger.debug(f"Built GroupMax network d={d} widths={list(widths)} G={group_size} seed={seed}")
    return params


def forward_groupmax(p: GroupMaxParams, x) -> tuple[float, Tape]:
    return p.forward_point(x)


def embed_maxaffine(p: MaxAffineParams, depth: int, group_size: int) -> GroupMaxParams:
    """
    Deep GroupMax network realizing exactly the cuts of a max-affine network.

    Layer 1 repeats every cut G times, so each group max returns one cut.
    Middle layers copy their inputs the same way, and the output layer is the
    identity followed by the global max. All biases beyond layer 1 are zero.
    """
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    n_cuts = p.cut_count
    A, b = p.weights["A"], p.weights["b"]
    if depth == 1:
        return GroupMaxParams(d=p.d, widths=(n_cuts,), group_size=group_size, weights={"A1": A, "B1": b})

    repeated_identity = np.repeat(np.eye(n_cuts), group_size, axis=0)
    weights = {"A1": np.repeat(A, group_size, axis=0), "B1": np.repeat(b, group_size)}
    for j in range(2, depth):
        weights[f"A{j}"] = repeated_identity
        weights[f"B{j}"] = np.zeros(n_cuts * group_size)
    weights[f"A{depth}"] = np.eye(n_cuts)
    weights[f"B{depth}"] = np.zeros(n_cuts)

    widths = (n_cuts * group_size,) * (depth - 1) + (n_cuts,)
    return GroupMaxParams(d=p.d, widths=widths, group_size=group_size, weights=weights)
