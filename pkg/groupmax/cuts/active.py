"""
Active-cut extraction.

The forward tape records the winner of every max and the mask of every clamp.
With those choices fixed, the network is affine in its convex input, and
propagating ``(J, c)`` with ``value = J @ y + c`` through the recorded
primitives yields the affine piece attaining h at the query point.
"""

from typing import Callable, Optional

import numpy as np

from groupmax.diffcore import Tape, TapeRecord
from groupmax.diffcore.linalg import FLOAT
from groupmax.networks import NetworkParams, PartialNetworkParams
from groupmax.utils.errors import ShapeMismatchError, StructuralError

from .types import Cut

AffineMap = tuple[np.ndarray, np.ndarray]
TraceRule = Callable[[TapeRecord, list[Optional[AffineMap]]], AffineMap]


def _constant(value: np.ndarray, dim: int) -> AffineMap:
    flat = value.reshape(-1)
    return np.zeros((flat.shape[0], dim)), flat


def _not_affine(record: TapeRecord, *_):
    raise StructuralError(f"'{record.op}' is not affine in the convex input; no active cut exists")


def _trace_affine(record: TapeRecord, maps):
    A, b, _ = record.inputs
    if maps[0] is not None or maps[1] is not None:
        _not_affine(record)
    J, c = maps[2]
    intercept = A.value @ c
    if b is not None:
        intercept = intercept + b.value
    return A.value @ J, intercept


def _trace_relu_clamp(record: TapeRecord, maps):
    J, c = maps[0]
    mask = record.aux["mask"].reshape(-1)
    return mask[:, None] * J, mask * c


def _trace_group_max(record: TapeRecord, maps):
    J, c = maps[0]
    winners = record.aux["winners"].reshape(-1)
    return J[winners], c[winners]


def _trace_add(record: TapeRecord, maps):
    dim = next(m[0].shape[1] for m in maps if m is not None)
    (Ja, ca), (Jb, cb) = (m if m is not None else _constant(node.value, dim) for m, node in zip(maps, record.inputs))
    return Ja + Jb, ca + cb


def _trace_hadamard(record: TapeRecord, maps):
    if maps[0] is not None and maps[1] is not None:
        _not_affine(record)
    traced = 0 if maps[0] is not None else 1
    J, c = maps[traced]
    scale = record.inputs[1 - traced].value.reshape(-1)
    return scale[:, None] * J, scale * c


def _trace_batched_matvec(record: TapeRecord, maps):
    if maps[0] is not None:
        _not_affine(record)
    P = record.inputs[0].value[0]
    J, c = maps[1]
    return P @ J, P @ c


_TRACE_RULES: dict[str, TraceRule] = {
    "affine": _trace_affine,
    "relu_clamp": _trace_relu_clamp,
    "group_max": _trace_group_max,
    "global_max": _trace_group_max,
    "add": _trace_add,
    "hadamard": _trace_hadamard,
    "batched_matvec": _trace_batched_matvec,
    "column_scale": _not_affine,
    "tanh": _not_affine,
    "mse": _not_affine,
}


def trace_active_piece(tape: Tape, leaf: str) -> Cut:
    """Compose the affine pieces selected on a batch-of-one tape, w.r.t. one leaf."""
    source = tape.leaves.get(leaf)
    if source is None:
        raise StructuralError(f"tape has no leaf named '{leaf}'")
    if source.value.shape[0] != 1:
        raise ShapeMismatchError(f"active cuts need a single point, tape holds a batch of {source.value.shape[0]}")
    dim = source.value.shape[1]

    maps: dict[int, AffineMap] = {source.index: (np.eye(dim, dtype=FLOAT), np.zeros(dim, dtype=FLOAT))}
    for record in tape.records:
        inputs = [maps.get(node.index) if node is not None else None for node in record.inputs]
        if all(m is None for m in inputs):
            continue
        maps[record.output.index] = _TRACE_RULES[record.op](record, inputs)

    output = tape.output
    if output.index not in maps:
        return Cut(np.zeros(dim), float(output.value.reshape(-1)[0]))
    J, c = maps[output.index]
    return Cut(J[0], float(c[0]))


def active_cut(p: NetworkParams, point, x_tilde=None) -> Cut:
    """
    The cut attaining h at ``point``, from the argmax winners of its forward pass.

    For partially convex networks ``point`` is y and ``x_tilde`` is required;
    the cut is then in y. Ties go to the lowest index, as in the forward pass.
    """
    point = np.atleast_1d(np.asarray(point, dtype=FLOAT)).reshape(-1)
    if isinstance(p, PartialNetworkParams):
        if x_tilde is None:
            raise StructuralError("partially convex networks need x_tilde for an active cut")
        x_tilde = np.atleast_1d(np.asarray(x_tilde, dtype=FLOAT)).reshape(-1)
        point = np.concatenate([x_tilde, point])
    _, tape = p.forward_point(point)
    return trace_active_piece(tape, p.convex_leaf)
