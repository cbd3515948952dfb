from .gradcheck import GradCheckResult, finite_diff_check
from .linalg import affine, as_batch, as_matrix, as_vector, global_max, group_max, relu_clamp
from .records import Node, TapeRecord
from .rules import PrimitiveRegistry
from .tape import Tape, backward

__all__ = [
    "Tape",
    "Node",
    "TapeRecord",
    "PrimitiveRegistry",
    "backward",
    "finite_diff_check",
    "GradCheckResult",
    "affine",
    "relu_clamp",
    "group_max",
    "global_max",
    "as_matrix",
    "as_vector",
    "as_batch",
]
