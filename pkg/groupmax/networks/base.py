from abc import ABC, abstractmethod
from typing import Any, ClassVar

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from groupmax.diffcore import Node, Tape
from groupmax.diffcore.linalg import FLOAT, as_batch
from groupmax.utils.errors import ShapeMismatchError, StructuralError


class NetworkParams(BaseModel, ABC):
    """
    Base class for the parameter sets of every architecture.

    Structural constants are pydantic fields on the subclasses; the weights
    are float64 arrays keyed by family name. Instances are immutable, so one
    parameter set can be evaluated from several threads at once.

    Inputs are always a batch ``X`` of shape ``(batch, input_dim)``. Partial
    networks read their non-convex coordinates first and the ``convex_dim``
    convex coordinates last.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: ClassVar[str] = ""
    # name of the tape leaf holding the convex coordinates
    convex_leaf: ClassVar[str] = "x"

    weights: dict[str, np.ndarray]

    @field_validator("weights", mode="before")
    @classmethod
    def coerce_weights(cls, value: dict) -> dict[str, np.ndarray]:
        weights = {}
        for name, array in dict(value).items():
            array = np.array(array, dtype=FLOAT)
            if not np.all(np.isfinite(array)):
                raise StructuralError(f"weight family '{name}' has non-finite entries")
            weights[name] = array
        return weights

    @model_validator(mode="after")
    def check_weight_shapes(self) -> "NetworkParams":
        expected = self.weight_shapes()
        missing = sorted(set(expected) - set(self.weights))
        extra = sorted(set(self.weights) - set(expected))
        if missing or extra:
            raise StructuralError(
                f"{self.kind} weights do not match the structure (missing: {missing}, unexpected: {extra})"
            )
        for name, shape in expected.items():
            if self.weights[name].shape != shape:
                raise ShapeMismatchError(
                    f"weight family '{name}' has shape {self.weights[name].shape}, expected {shape}"
                )
        return self

    # Structure

    @property
    @abstractmethod
    def input_dim(self) -> int: ...

    @property
    def convex_dim(self) -> int:
        return self.input_dim

    @property
    def convex_slice(self) -> slice:
        return slice(self.input_dim - self.convex_dim, self.input_dim)

    @abstractmethod
    def weight_shapes(self) -> dict[str, tuple[int, ...]]:
        """Shape of every weight family, as forced by the structural constants."""

    def structure(self) -> dict[str, Any]:
        """Structural constants, everything but the weights."""
        return self.model_dump(exclude={"weights"})

    def parameter_count(self) -> int:
        return int(sum(array.size for array in self.weights.values()))

    def with_weights(self, weights: dict[str, np.ndarray]) -> "NetworkParams":
        """Same structure, new weights (validated)."""
        return type(self).model_validate({**self.structure(), "weights": weights})

    # Evaluation

    def bind(self, tape: Tape) -> dict[str, Node]:
        return {name: tape.leaf(name, self.weights[name]) for name in sorted(self.weights)}

    @abstractmethod
    def forward(self, tape: Tape, X: np.ndarray) -> Node:
        """Put the forward pass on the tape and return the output node."""

    def evaluate(self, X) -> np.ndarray:
        """h on a batch of points, shape (batch,). Nothing is recorded."""
        X = as_batch(X, self.input_dim, name="input")
        out = self.forward(Tape(record=False), X)
        return out.value.reshape(-1)

    def forward_point(self, x) -> tuple[float, Tape]:
        """h at a single point together with the recorded tape."""
        X = as_batch(x, self.input_dim, name="input")
        if X.shape[0] != 1:
            raise ShapeMismatchError(f"expected a single point, got a batch of {X.shape[0]}")
        tape = Tape()
        out = self.forward(tape, X)
        return float(out.value.reshape(-1)[0]), tape
