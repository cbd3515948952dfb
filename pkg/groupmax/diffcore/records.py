from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np


class Node:
    """A value produced on a tape; leaves additionally carry a name."""

    __slots__ = ("value", "index", "name")

    def __init__(self, value: np.ndarray, index: int, name: Optional[str] = None):
        self.value = value
        self.index = index
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"Node(#{self.index}{label}, shape={self.value.shape})"


@dataclass
class TapeRecord:
    """One primitive application: inputs, output and the branch choices made."""

    op: str
    inputs: tuple[Optional[Node], ...]
    output: Node
    params: dict[str, Any] = field(default_factory=dict)
    aux: dict[str, Any] = field(default_factory=dict)
