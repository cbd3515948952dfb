"""
Partially convex networks: h(x_tilde, y) convex in y for every fixed x_tilde.

Both architectures share one recursion. With u_0 = x_tilde and z_0 = 0, layer i
computes

    pre_i = ((W^z_i ⊗ (W^zu_i u_{i-1} + b^z_i))^+) z_{i-1}
            + W^y_i (y ∘ (W^yu_i u_{i-1} + b^y_i))
            + W^u_i u_{i-1} + b_i

and u_i = act(W~_i u_{i-1} + b~_i) feeds the next layer. The GroupMax variant
applies the group max to pre_i below the last layer and the global max on it.
The ICNN variant applies ReLU below the last layer and reads out a single
linear unit. The z-path families only exist from layer 2 on, since z_0 = 0.
"""

import re
from abc import abstractmethod
from typing import ClassVar, Literal

import numpy as np

from groupmax.diffcore import Node, Tape
from groupmax.diffcore import linalg
from groupmax.diffcore.linalg import check_groups
from groupmax.utils.errors import ShapeMismatchError, StructuralError

from .base import NetworkParams
from .init import glorot_uniform, nonnegative_uniform
from .layers import ConvexLayer

FAMILY_PATTERN = re.compile(r"^([A-Za-z]+?)(\d+)$")


class PartialNetworkParams(NetworkParams):
    convex_leaf: ClassVar[str] = "y"

    d: int
    k: int
    m_x: int
    m_y: int
    q: int
    activation: Literal["relu", "tanh"] = "relu"

    @property
    def input_dim(self) -> int:
        return self.d

    @property
    def convex_dim(self) -> int:
        return self.k

    @property
    def feature_dim(self) -> int:
        """Dimension of x_tilde."""
        return self.d - self.k

    @property
    @abstractmethod
    def state_dim(self) -> int:
        """Dimension of z_i."""

    @abstractmethod
    def layer_width(self, i: int) -> int: ...

    @abstractmethod
    def _activate(self, tape: Tape, pre: Node, i: int) -> Node: ...

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        if self.k < 1 or self.feature_dim < 1:
            raise StructuralError(f"need 1 <= k < d, got d={self.d}, k={self.k}")
        shapes: dict[str, tuple[int, ...]] = {}
        for i in range(1, self.q):
            shapes[f"Wt{i}"] = (self.m_x, self.u_dim(i))
            shapes[f"bt{i}"] = (self.m_x,)
        for i in range(1, self.q + 1):
            width, du = self.layer_width(i), self.u_dim(i)
            if i >= 2:
                shapes[f"Wz{i}"] = (width, self.state_dim)
                shapes[f"Wzu{i}"] = (self.state_dim, du)
                shapes[f"bz{i}"] = (self.state_dim,)
            shapes[f"Wy{i}"] = (width, self.k)
            shapes[f"Wyu{i}"] = (self.k, du)
            shapes[f"by{i}"] = (self.k,)
            shapes[f"Wu{i}"] = (width, du)
            shapes[f"b{i}"] = (width,)
        return shapes

    def u_dim(self, i: int) -> int:
        """Dimension of u_{i-1}, the feedforward state entering layer i."""
        return self.feature_dim if i == 1 else self.m_x

    def split(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return X[:, : self.feature_dim], X[:, self.feature_dim :]

    def _feedforward(self, tape: Tape, pre: Node) -> Node:
        return tape.tanh(pre) if self.activation == "tanh" else tape.relu_clamp(pre)

    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        x_part, y_part = self.split(X)
        u = tape.leaf("x_tilde", x_part)
        y = tape.leaf("y", y_part)
        w = self.bind(tape)

        z = None
        out = None
        for i in range(1, self.q + 1):
            pre = tape.add(
                tape.affine(w[f"Wu{i}"], w[f"b{i}"], u),
                tape.affine(w[f"Wy{i}"], None, tape.hadamard(y, tape.affine(w[f"Wyu{i}"], w[f"by{i}"], u))),
            )
            if z is not None:
                gate = tape.relu_clamp(tape.column_scale(w[f"Wz{i}"], tape.affine(w[f"Wzu{i}"], w[f"bz{i}"], u)))
                pre = tape.add(tape.batched_matvec(gate, z), pre)
            out = self._activate(tape, pre, i)
            if i < self.q:
                z = out
                u = self._feedforward(tape, tape.affine(w[f"Wt{i}"], w[f"bt{i}"], u))
        return out

    def conditional_layers(self, x_tilde) -> list[ConvexLayer]:
        """
        The layers as functions of y with x_tilde frozen.

        Evaluates A~^i(x_tilde) = W^y_i ⊗ (W^yu_i u_{i-1} + b^y_i), the
        intercepts W^u_i u_{i-1} + b_i and the clamped mixing matrices.
        """
        u = linalg.as_batch(x_tilde, self.feature_dim, name="x_tilde")
        if u.shape[0] != 1:
            raise ShapeMismatchError(f"expected a single x_tilde, got a batch of {u.shape[0]}")
        w = self.weights

        layers = []
        for i in range(1, self.q + 1):
            y_scale = linalg.affine(w[f"Wyu{i}"], w[f"by{i}"], u)[0]
            mix = None
            if i >= 2:
                gate = linalg.affine(w[f"Wzu{i}"], w[f"bz{i}"], u)[0]
                mix = linalg.relu_clamp(w[f"Wz{i}"] * gate[None, :])
            layers.append(
                ConvexLayer(
                    slopes=w[f"Wy{i}"] * y_scale[None, :],
                    intercepts=linalg.affine(w[f"Wu{i}"], w[f"b{i}"], u)[0],
                    mix=mix,
                    group_size=self.conditional_group_size(i),
                )
            )
            if i < self.q:
                pre = linalg.affine(w[f"Wt{i}"], w[f"bt{i}"], u)
                u = np.tanh(pre) if self.activation == "tanh" else linalg.relu_clamp(pre)
        return layers

    def conditional_group_size(self, i: int):
        raise StructuralError(f"{self.kind} networks have no finite cut representation")


class PartialGroupMaxParams(PartialNetworkParams):
    kind: ClassVar[str] = "partial_groupmax"

    group_size: int

    @property
    def state_dim(self) -> int:
        return check_groups(self.m_y, self.group_size)

    def layer_width(self, i: int) -> int:
        return self.m_y

    def _activate(self, tape: Tape, pre: Node, i: int) -> Node:
        if i < self.q:
            return tape.group_max(pre, self.group_size)
        return tape.global_max(pre)

    def conditional_group_size(self, i: int):
        return self.group_size if i < self.q else None


class PartialICNNParams(PartialNetworkParams):
    """Partial ICNN: the same recursion with ReLU and a single linear output unit."""

    kind: ClassVar[str] = "partial_icnn"

    @property
    def state_dim(self) -> int:
        return self.m_y

    def layer_width(self, i: int) -> int:
        return self.m_y if i < self.q else 1

    def _activate(self, tape: Tape, pre: Node, i: int) -> Node:
        return tape.relu_clamp(pre) if i < self.q else pre


def _init_partial(params: PartialNetworkParams, seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    weights = {}
    for name, shape in params.weight_shapes().items():
        family = FAMILY_PATTERN.match(name).group(1)
        if family == "Wz":
            weights[name] = nonnegative_uniform(rng, shape)
        elif family in ("bz", "by"):
            # keeps the ⊗ and ∘ products active at step 0
            weights[name] = np.ones(shape)
        elif family in ("b", "bt"):
            weights[name] = np.zeros(shape)
        else:
            weights[name] = glorot_uniform(rng, shape)
    return weights


def build_partial(
    d: int,
    k: int,
    m_x: int,
    m_y: int,
    group_size: int,
    q: int,
    seed: int = 0,
    feedforward_activation: str = "relu",
) -> PartialGroupMaxParams:
    check_groups(m_y, group_size)
    structure = dict(d=d, k=k, m_x=m_x, m_y=m_y, q=q, group_size=group_size, activation=feedforward_activation)
    weights = _init_partial(PartialGroupMaxParams.model_construct(**structure, weights={}), seed)
    return PartialGroupMaxParams(**structure, weights=weights)


def build_partial_icnn(
    d: int,
    k: int,
    m_x: int,
    m_y: int,
    q: int,
    seed: int = 0,
    feedforward_activation: str = "relu",
) -> PartialICNNParams:
    structure = dict(d=d, k=k, m_x=m_x, m_y=m_y, q=q, activation=feedforward_activation)
    weights = _init_partial(PartialICNNParams.model_construct(**structure, weights={}), seed)
    return PartialICNNParams(**structure, weights=weights)


def forward_partial(p: PartialNetworkParams, x_tilde, y) -> tuple[float, Tape]:
    x_tilde = linalg.as_vector(np.atleast_1d(x_tilde), "x_tilde")
    y = linalg.as_vector(np.atleast_1d(y), "y")
    return p.forward_point(np.concatenate([x_tilde, y]))
