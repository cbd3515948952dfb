from typing import Literal

from pydantic import Field, model_validator

from .base import GroupMaxBaseModel


class SamplerSpec(GroupMaxBaseModel):
    """Law of the input points, identical and independent across coordinates."""

    kind: Literal["gaussian", "uniform"] = "gaussian"
    dimension: int = Field(default=1, ge=1)
    mean: float = 0.0
    variance: float = 1.0
    lo: float = -1.0
    hi: float = 1.0

    @model_validator(mode="after")
    def check_law(self) -> "SamplerSpec":
        if self.kind == "gaussian" and not self.variance > 0:
            raise ValueError(f"gaussian sampler needs variance > 0, got {self.variance}")
        if self.kind == "uniform" and not self.lo < self.hi:
            raise ValueError(f"uniform sampler needs lo < hi, got lo={self.lo}, hi={self.hi}")
        return self

    @property
    def std(self) -> float:
        return self.variance**0.5

    def label(self) -> str:
        if self.kind == "gaussian":
            return f"N({self.mean:g},{self.variance:g})^{self.dimension}"
        return f"U([{self.lo:g},{self.hi:g}])^{self.dimension}"


class TrainingBlock(GroupMaxBaseModel):
    """Optimizer settings as they appear in the `training` block of a config."""

    learning_rate: float = Field(default=1e-3, gt=0)
    batch_size: int = Field(default=300, ge=1)
    iterations: int = Field(default=20_000, ge=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    epsilon: float = Field(default=1e-8, gt=0)
    normalize: bool = False
    seed: int = Field(default=0, ge=0)
    log_every: int = Field(default=100, ge=1)


class TrainConfig(TrainingBlock):
    sampler: SamplerSpec = SamplerSpec()
    noise_std: float = Field(default=0.0, ge=0)
