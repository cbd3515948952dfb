from typing import Literal, Optional

from pydantic import Field, model_validator

from groupmax.diffcore.linalg import check_groups
from groupmax.utils.errors import StructuralError

from .base import GroupMaxBaseModel

NetworkKind = Literal["groupmax", "partial_groupmax", "maxaffine", "icnn", "partial_icnn", "mlp"]

PARTIAL_KINDS = ("partial_groupmax", "partial_icnn")


class ArchitectureSpec(GroupMaxBaseModel):
    """
    The `architecture` block of an experiment config.

    Which fields apply depends on `kind`:
    - groupmax: widths (M_1..M_q), group_size
    - partial_groupmax: convex_dim, feedforward_width, convex_width, depth, group_size, activation
    - partial_icnn: convex_dim, feedforward_width, convex_width, depth, activation
    - maxaffine: cuts
    - icnn, mlp: widths (hidden layers); mlp also takes activation
    """

    kind: NetworkKind
    input_dim: int = Field(ge=1)
    widths: list[int] = Field(default_factory=list)
    group_size: int = Field(default=1, ge=1)
    cuts: Optional[int] = Field(default=None, ge=1)
    convex_dim: Optional[int] = Field(default=None, ge=1)
    feedforward_width: Optional[int] = Field(default=None, ge=1)
    convex_width: Optional[int] = Field(default=None, ge=1)
    depth: Optional[int] = Field(default=None, ge=1)
    activation: Literal["relu", "tanh"] = "relu"
    seed: int = Field(default=0, ge=0)

    @property
    def is_partial(self) -> bool:
        return self.kind in PARTIAL_KINDS

    @property
    def convex_input_dim(self) -> int:
        """Number of trailing input coordinates the network is convex in (0 for mlp)."""
        if self.kind == "mlp":
            return 0
        return self.convex_dim if self.is_partial else self.input_dim

    @model_validator(mode="after")
    def check_structure(self) -> "ArchitectureSpec":
        try:
            if self.kind == "groupmax":
                self._require(self.widths, "widths")
                for width in self.widths[:-1]:
                    check_groups(width, self.group_size)
            elif self.kind == "maxaffine":
                self._require(self.cuts, "cuts")
            elif self.kind in ("icnn", "mlp"):
                self._require(self.widths, "widths")
            else:
                for key in ("convex_dim", "feedforward_width", "convex_width", "depth"):
                    self._require(getattr(self, key), key)
                if self.convex_dim >= self.input_dim:
                    raise ValueError(
                        f"convex_dim ({self.convex_dim}) must be smaller than input_dim ({self.input_dim})"
                    )
                if self.kind == "partial_groupmax":
                    check_groups(self.convex_width, self.group_size)
        except StructuralError as exc:
            raise ValueError(exc.message) from exc
        if any(width < 1 for width in self.widths):
            raise ValueError(f"every width must be at least 1, got {self.widths}")
        return self

    def _require(self, value, key: str):
        if value is None or value == []:
            raise ValueError(f"architecture kind '{self.kind}' requires '{key}'")
