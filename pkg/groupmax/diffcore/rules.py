from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from . import linalg
from .records import TapeRecord

ForwardFn = Callable[..., tuple[np.ndarray, dict[str, Any]]]
BackwardFn = Callable[[TapeRecord, np.ndarray], tuple[Optional[np.ndarray], ...]]


@dataclass(frozen=True)
class PrimitiveRule:
    forward: ForwardFn
    backward: BackwardFn


class PrimitiveRegistry:
    """Registry of the differentiable primitives; the set is closed on purpose."""

    _rules: dict[str, PrimitiveRule] = {}

    @classmethod
    def register(cls, op: str, forward: ForwardFn):
        """Register a forward kernel; decorates the matching backward rule."""

        def decorator(backward: BackwardFn) -> BackwardFn:
            cls._rules[op] = PrimitiveRule(forward=forward, backward=backward)
            return backward

        return decorator

    @classmethod
    def get(cls, op: str) -> PrimitiveRule:
        rule = cls._rules.get(op)
        if rule is None:
            raise KeyError(f"No primitive registered for op: {op}")
        return rule

    @classmethod
    def list_registered_ops(cls) -> list[str]:
        return list(cls._rules.keys())

    @classmethod
    def is_registered(cls, op: str) -> bool:
        return op in cls._rules


def unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back down to an operand's shape."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# Forward kernels. Each returns (output, aux) where aux keeps branch choices.


def _affine_forward(A, b, v):
    return linalg.affine(A, b, v), {}


def _relu_clamp_forward(A):
    return linalg.relu_clamp(A), {"mask": linalg.relu_clamp_mask(A)}


def _group_max_forward(v, group_size: int):
    out, winners = linalg.group_max(v, group_size)
    return out, {"winners": winners}


def _global_max_forward(v):
    out, winners = linalg.global_max(v)
    return out, {"winners": winners}


def _add_forward(a, b):
    return a + b, {}


def _hadamard_forward(a, b):
    return a * b, {}


def _column_scale_forward(W, c):
    return linalg.column_scale(W, c), {}


def _batched_matvec_forward(P, z):
    return linalg.batched_matvec(P, z), {}


def _tanh_forward(v):
    return np.tanh(v), {}


def _mse_forward(pred, target: np.ndarray):
    residual = pred - target
    return np.asarray(np.mean(residual * residual)), {}


# Backward rules


@PrimitiveRegistry.register("affine", _affine_forward)
def _affine_backward(record: TapeRecord, g: np.ndarray):
    A, b, v = (node.value if node is not None else None for node in record.inputs)
    grad_A = g.T @ v
    grad_b = g.sum(axis=0) if b is not None else None
    grad_v = g @ A
    return grad_A, grad_b, grad_v


@PrimitiveRegistry.register("relu_clamp", _relu_clamp_forward)
def _relu_clamp_backward(record: TapeRecord, g: np.ndarray):
    return (g * record.aux["mask"],)


@PrimitiveRegistry.register("group_max", _group_max_forward)
def _group_max_backward(record: TapeRecord, g: np.ndarray):
    grad_v = np.zeros_like(record.inputs[0].value)
    np.put_along_axis(grad_v, record.aux["winners"], g, axis=1)
    return (grad_v,)


@PrimitiveRegistry.register("global_max", _global_max_forward)
def _global_max_backward(record: TapeRecord, g: np.ndarray):
    grad_v = np.zeros_like(record.inputs[0].value)
    grad_v[np.arange(grad_v.shape[0]), record.aux["winners"]] = g
    return (grad_v,)


@PrimitiveRegistry.register("add", _add_forward)
def _add_backward(record: TapeRecord, g: np.ndarray):
    a, b = record.inputs
    return unbroadcast(g, a.shape), unbroadcast(g, b.shape)


@PrimitiveRegistry.register("hadamard", _hadamard_forward)
def _hadamard_backward(record: TapeRecord, g: np.ndarray):
    a, b = record.inputs
    return unbroadcast(g * b.value, a.shape), unbroadcast(g * a.value, b.shape)


@PrimitiveRegistry.register("column_scale", _column_scale_forward)
def _column_scale_backward(record: TapeRecord, g: np.ndarray):
    W, c = record.inputs
    grad_W = np.einsum("bmn,bn->mn", g, c.value)
    grad_c = np.einsum("bmn,mn->bn", g, W.value)
    return grad_W, grad_c


@PrimitiveRegistry.register("batched_matvec", _batched_matvec_forward)
def _batched_matvec_backward(record: TapeRecord, g: np.ndarray):
    P, z = record.inputs
    grad_P = g[:, :, None] * z.value[:, None, :]
    grad_z = np.einsum("bmn,bm->bn", P.value, g)
    return grad_P, grad_z


@PrimitiveRegistry.register("tanh", _tanh_forward)
def _tanh_backward(record: TapeRecord, g: np.ndarray):
    out = record.output.value
    return (g * (1.0 - out * out),)


@PrimitiveRegistry.register("mse", _mse_forward)
def _mse_backward(record: TapeRecord, g: np.ndarray):
    pred = record.inputs[0].value
    target = record.params["target"]
    return (g * 2.0 * (pred - target) / pred.size,)
