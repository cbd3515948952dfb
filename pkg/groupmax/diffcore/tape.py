from typing import Optional

import numpy as np

from groupmax.utils.errors import ShapeMismatchError, TapeUsageError

from . import linalg
from .records import Node, TapeRecord
from .rules import PrimitiveRegistry


class Tape:
    """
    Ordered record of the primitives applied during one forward pass.

    A tape is confined to one forward/backward pair. With ``record=False`` it
    only evaluates, which is what Monte Carlo evaluation uses. ``min_gap``
    tracks the smallest margin seen at any max or clamp, so gradient checks
    can stay away from ties.
    """

    def __init__(self, record: bool = True):
        self.record = record
        self.records: list[TapeRecord] = []
        self.leaves: dict[str, Node] = {}
        self.min_gap = float("inf")
        self._next_index = 0
        self._last: Optional[Node] = None

    def _new_node(self, value: np.ndarray, name: Optional[str] = None) -> Node:
        node = Node(value, self._next_index, name)
        self._next_index += 1
        return node

    def leaf(self, name: str, value) -> Node:
        """Register a named input or parameter."""
        if name in self.leaves:
            raise TapeUsageError(f"Leaf '{name}' is already on the tape")
        node = self._new_node(np.asarray(value, dtype=linalg.FLOAT), name)
        self.leaves[name] = node
        return node

    def _apply(self, op: str, inputs: tuple[Optional[Node], ...], **params) -> Node:
        rule = PrimitiveRegistry.get(op)
        values = tuple(node.value if node is not None else None for node in inputs)
        out, aux = rule.forward(*values, **params)
        node = self._new_node(out)
        if self.record:
            self.records.append(TapeRecord(op=op, inputs=inputs, output=node, params=params, aux=aux))
        self._last = node
        return node

    # Primitive set

    def affine(self, A: Node, b: Optional[Node], v: Node) -> Node:
        return self._apply("affine", (A, b, v))

    def relu_clamp(self, A: Node) -> Node:
        self.min_gap = min(self.min_gap, float(np.min(np.abs(A.value))))
        return self._apply("relu_clamp", (A,))

    def group_max(self, v: Node, group_size: int) -> Node:
        linalg.check_groups(v.shape[-1], group_size)
        self.min_gap = min(self.min_gap, linalg.max_gap(v.value, group_size))
        return self._apply("group_max", (v,), group_size=group_size)

    def global_max(self, v: Node) -> Node:
        self.min_gap = min(self.min_gap, linalg.max_gap(v.value))
        return self._apply("global_max", (v,))

    def add(self, a: Node, b: Node) -> Node:
        return self._apply("add", (a, b))

    def hadamard(self, a: Node, b: Node) -> Node:
        return self._apply("hadamard", (a, b))

    def column_scale(self, W: Node, c: Node) -> Node:
        return self._apply("column_scale", (W, c))

    def batched_matvec(self, P: Node, z: Node) -> Node:
        return self._apply("batched_matvec", (P, z))

    def tanh(self, v: Node) -> Node:
        return self._apply("tanh", (v,))

    def mse(self, pred: Node, target: np.ndarray) -> Node:
        target = np.asarray(target, dtype=linalg.FLOAT)
        if target.shape != pred.shape:
            raise ShapeMismatchError(f"targets have shape {target.shape}, predictions {pred.shape}")
        return self._apply("mse", (pred,), target=target)

    # Inspection

    @property
    def output(self) -> Node:
        if self._last is None:
            raise TapeUsageError("Tape holds no operations")
        return self._last

    def winners(self) -> list[np.ndarray]:
        """Argmax choices of every max primitive, in forward order."""
        return [r.aux["winners"] for r in self.records if "winners" in r.aux]

    def replay(self) -> np.ndarray:
        """Re-execute the recorded primitives from the stored leaf values."""
        if not self.record:
            raise TapeUsageError("Tape was created with record=False and cannot be replayed")
        values: dict[int, np.ndarray] = {node.index: node.value for node in self.leaves.values()}
        for record in self.records:
            rule = PrimitiveRegistry.get(record.op)
            inputs = tuple(values[node.index] if node is not None else None for node in record.inputs)
            out, _ = rule.forward(*inputs, **record.params)
            values[record.output.index] = out
        return values[self.output.index]


def backward(tape: Tape, seed_gradient: float = 1.0) -> dict[str, np.ndarray]:
    """
    Reverse sweep over the tape.

    Returns the gradient of the scalar output with respect to every leaf,
    keyed by leaf name. Max primitives route the whole upstream gradient to
    their recorded winners; clamps pass it where the input was positive.
    """
    if not tape.record:
        raise TapeUsageError("Cannot differentiate a tape created with record=False")
    output = tape.output
    if output.value.size != 1:
        raise TapeUsageError(
            f"Backward needs a scalar-terminated tape, output has shape {output.value.shape}"
        )

    grads: dict[int, np.ndarray] = {output.index: np.full_like(output.value, seed_gradient)}
    for record in reversed(tape.records):
        upstream = grads.pop(record.output.index, None)
        if upstream is None:
            continue
        rule = PrimitiveRegistry.get(record.op)
        for node, grad in zip(record.inputs, rule.backward(record, upstream)):
            if node is None or grad is None:
                continue
            if node.index in grads:
                grads[node.index] = grads[node.index] + grad
            else:
                grads[node.index] = grad

    return {
        name: grads.get(node.index, np.zeros_like(node.value)) for name, node in tape.leaves.items()
    }
