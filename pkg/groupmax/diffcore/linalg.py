"""
Dense float64 kernels for the network primitives.

Activations carry a leading batch axis, shape ``(batch, n)``; parameters are
unbatched. A single point is a batch of one. Every max-type kernel breaks ties
toward the lowest index, which is what ``numpy.argmax`` does.
"""

from typing import Optional

import numpy as np

from groupmax.utils.errors import ShapeMismatchError, StructuralError

FLOAT = np.float64


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Validate a RealMatrix: 2-D, at least 1x1, finite float64 entries."""
    array = np.asarray(value, dtype=FLOAT)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise ShapeMismatchError(f"{name} must be a non-empty 2-D array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise StructuralError(f"{name} has non-finite entries")
    return array


def as_vector(value, name: str = "vector") -> np.ndarray:
    """Validate a RealVector: 1-D, length at least 1, finite float64 entries."""
    array = np.asarray(value, dtype=FLOAT)
    if array.ndim != 1 or array.shape[0] < 1:
        raise ShapeMismatchError(f"{name} must be a non-empty 1-D array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise StructuralError(f"{name} has non-finite entries")
    return array


def as_batch(value, dim: Optional[int] = None, name: str = "batch") -> np.ndarray:
    """Promote a point or a batch of points to shape (batch, dim)."""
    array = np.asarray(value, dtype=FLOAT)
    if array.ndim == 0:
        array = array.reshape(1, 1)
    elif array.ndim == 1:
        array = array.reshape(1, -1) if dim is None or array.shape[0] == dim else array.reshape(-1, 1)
    if array.ndim != 2:
        raise ShapeMismatchError(f"{name} must be at most 2-D, got shape {array.shape}")
    if dim is not None and array.shape[1] != dim:
        raise ShapeMismatchError(f"{name} has {array.shape[1]} columns, expected {dim}")
    return array


def affine(A: np.ndarray, b: Optional[np.ndarray], v: np.ndarray) -> np.ndarray:
    """result_i = sum_j A_ij v_j + b_i, applied row-wise on a batch."""
    if A.ndim != 2:
        raise ShapeMismatchError(f"affine weight must be 2-D, got shape {A.shape}")
    if v.shape[-1] != A.shape[1]:
        raise ShapeMismatchError(f"affine input has length {v.shape[-1]}, weight expects {A.shape[1]}")
    out = v @ A.T
    if b is not None:
        if b.shape != (A.shape[0],):
            raise ShapeMismatchError(f"affine bias has shape {b.shape}, expected ({A.shape[0]},)")
        out = out + b
    return out


def relu_clamp(A: np.ndarray) -> np.ndarray:
    """Entrywise max(A, 0)."""
    return np.maximum(A, 0.0)


def relu_clamp_mask(A: np.ndarray) -> np.ndarray:
    # subgradient 0 at exactly 0
    return (A > 0.0).astype(FLOAT)


def check_groups(width: int, group_size: int) -> int:
    if group_size < 1:
        raise StructuralError(f"group size must be at least 1, got {group_size}")
    if width % group_size != 0:
        raise StructuralError(
            f"group size G={group_size} must divide the layer width M={width} (M mod G = {width % group_size})"
        )
    return width // group_size


def group_max(v: np.ndarray, group_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Max over contiguous blocks of G entries; winners are global indices."""
    batch, width = v.shape
    groups = check_groups(width, group_size)
    blocks = v.reshape(batch, groups, group_size)
    local = np.argmax(blocks, axis=2)
    winners = local + np.arange(groups) * group_size
    out = np.take_along_axis(blocks, local[:, :, None], axis=2)[:, :, 0]
    return out, winners


def global_max(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Max over the whole vector, per batch row, with its lowest-index winner."""
    winners = np.argmax(v, axis=1)
    out = v[np.arange(v.shape[0]), winners]
    return out, winners


def column_scale(W: np.ndarray, c: np.ndarray) -> np.ndarray:
    """(W ⊗ c)_{ij} = W_ij c_j for every batch row of c: shape (batch, m, n)."""
    if c.shape[-1] != W.shape[1]:
        raise ShapeMismatchError(f"column scale has length {c.shape[-1]}, weight has {W.shape[1]} columns")
    return W[None, :, :] * c[:, None, :]


def batched_matvec(P: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Per-sample matrix times per-sample vector: (batch, m, n) x (batch, n)."""
    if P.shape[0] != z.shape[0] or P.shape[2] != z.shape[1]:
        raise ShapeMismatchError(f"batched matvec shapes {P.shape} and {z.shape} do not conform")
    return np.einsum("bmn,bn->bm", P, z)


def max_gap(v: np.ndarray, group_size: Optional[int] = None) -> float:
    """Smallest margin between a block winner and its runner-up (inf for singleton blocks)."""
    batch, width = v.shape
    size = width if group_size is None else group_size
    if size < 2:
        return float("inf")
    blocks = np.sort(v.reshape(batch, width // size, size), axis=2)
    return float(np.min(blocks[:, :, -1] - blocks[:, :, -2]))
