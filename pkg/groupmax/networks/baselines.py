from typing import ClassVar, Literal

import numpy as np
from pydantic import field_validator

from groupmax.diffcore import Node, Tape

from .base import NetworkParams
from .init import glorot_uniform, nonnegative_uniform


def _check_hidden(value: tuple[int, ...]) -> tuple[int, ...]:
    if not value or any(width < 1 for width in value):
        raise ValueError(f"hidden widths must be a nonempty list of positive counts, got {list(value)}")
    return value


class ICNNParams(NetworkParams):
    """
    Input convex network, convex in all of x.

    z_1 = relu(W^x_1 x + b_1), z_{l+1} = relu((W^z_{l+1})^+ z_l + W^x_{l+1} x + b_{l+1}),
    h(x) = (W^z_out)^+ z_L + W^x_out x + b_out.
    """

    kind: ClassVar[str] = "icnn"

    d: int
    hidden: tuple[int, ...]

    @field_validator("hidden")
    @classmethod
    def check_hidden(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        return _check_hidden(value)

    @property
    def input_dim(self) -> int:
        return self.d

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        shapes = {"Wx1": (self.hidden[0], self.d), "b1": (self.hidden[0],)}
        for l in range(2, len(self.hidden) + 1):
            shapes[f"Wz{l}"] = (self.hidden[l - 1], self.hidden[l - 2])
            shapes[f"Wx{l}"] = (self.hidden[l - 1], self.d)
            shapes[f"b{l}"] = (self.hidden[l - 1],)
        shapes["Wz_out"] = (1, self.hidden[-1])
        shapes["Wx_out"] = (1, self.d)
        shapes["b_out"] = (1,)
        return shapes

    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        x = tape.leaf("x", X)
        w = self.bind(tape)
        z = tape.relu_clamp(tape.affine(w["Wx1"], w["b1"], x))
        for l in range(2, len(self.hidden) + 1):
            pre = tape.add(
                tape.affine(tape.relu_clamp(w[f"Wz{l}"]), None, z),
                tape.affine(w[f"Wx{l}"], w[f"b{l}"], x),
            )
            z = tape.relu_clamp(pre)
        return tape.add(
            tape.affine(tape.relu_clamp(w["Wz_out"]), None, z),
            tape.affine(w["Wx_out"], w["b_out"], x),
        )


class MLPParams(NetworkParams):
    """Plain feedforward network with a linear readout; no convexity constraint."""

    kind: ClassVar[str] = "mlp"

    d: int
    hidden: tuple[int, ...]
    activation: Literal["relu", "tanh"] = "relu"

    @field_validator("hidden")
    @classmethod
    def check_hidden(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        return _check_hidden(value)

    @property
    def input_dim(self) -> int:
        return self.d

    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        fan_in = (self.d,) + self.hidden
        shapes = {}
        for l, width in enumerate(self.hidden, start=1):
            shapes[f"W{l}"] = (width, fan_in[l - 1])
            shapes[f"b{l}"] = (width,)
        shapes["W_out"] = (1, self.hidden[-1])
        shapes["b_out"] = (1,)
        return shapes

    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        v = tape.leaf("x", X)
        w = self.bind(tape)
        for l in range(1, len(self.hidden) + 1):
            pre = tape.affine(w[f"W{l}"], w[f"b{l}"], v)
            v = tape.tanh(pre) if self.activation == "tanh" else tape.relu_clamp(pre)
        return tape.affine(w["W_out"], w["b_out"], v)


def build_icnn(d: int, hidden, seed: int = 0) -> ICNNParams:
    hidden = tuple(int(width) for width in hidden)
    structure = ICNNParams.model_construct(d=d, hidden=_check_hidden(hidden), weights={})
    rng = np.random.default_rng(seed)
    weights = {}
    for name, shape in structure.weight_shapes().items():
        if name.startswith("Wz"):
            weights[name] = nonnegative_uniform(rng, shape)
        elif name.startswith("b"):
            weights[name] = np.zeros(shape)
        else:
            weights[name] = glorot_uniform(rng, shape)
    return ICNNParams(d=d, hidden=hidden, weights=weights)


def build_mlp(d: int, hidden, seed: int = 0, activation: str = "relu") -> MLPParams:
    hidden = tuple(int(width) for width in hidden)
    structure = MLPParams.model_construct(d=d, hidden=_check_hidden(hidden), activation=activation, weights={})
    rng = np.random.default_rng(seed)
    weights = {
        name: np.zeros(shape) if name.startswith("b") else glorot_uniform(rng, shape)
        for name, shape in structure.weight_shapes().items()
    }
    return MLPParams(d=d, hidden=hidden, activation=activation, weights=weights)


def forward_icnn(p: ICNNParams, x) -> tuple[float, Tape]:
    return p.forward_point(x)


def forward_mlp(p: MLPParams, x) -> tuple[float, Tape]:
    return p.forward_point(x)
