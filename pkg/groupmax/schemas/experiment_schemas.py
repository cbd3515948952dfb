from pathlib import Path
from typing import Optional

import yaml
from pydantic import Field, model_validator

from groupmax.bench.targets import TargetFunction, TargetRegistry
from groupmax.config.settings import settings
from groupmax.utils.errors import ConfigError, StructuralError, UnknownIdentifierError

from .base import GroupMaxBaseModel
from .network_schemas import ArchitectureSpec
from .training_schemas import SamplerSpec, TrainConfig, TrainingBlock


class CaseSpec(GroupMaxBaseModel):
    """The `case` block: which function is fitted, on which law, with which noise."""

    function: str
    sampler: SamplerSpec
    noise_std: float = Field(default=0.0, ge=0)
    dimension: Optional[int] = Field(default=None, ge=1)
    convex_dim: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_function(self) -> "CaseSpec":
        target = _resolve(self.function, self.dimension or self.sampler.dimension, self.convex_dim)
        if target.dimension != self.sampler.dimension:
            raise ValueError(
                f"{self.function} takes {target.dimension} inputs but the sampler draws {self.sampler.dimension}"
            )
        return self

    def target(self) -> TargetFunction:
        return TargetRegistry.create_target(self.function, self.sampler.dimension, self.convex_dim)


class OutputSpec(GroupMaxBaseModel):
    directory: str = "results/train"
    model_file: str = "model.json"
    report_file: str = "report.json"
    loss_file: str = "loss.csv"

    def path(self, name: str, directory: Optional[str | Path] = None) -> Path:
        return Path(directory or self.directory) / getattr(self, name)


def _resolve(function: str, dimension: Optional[int], convex_dim: Optional[int]) -> TargetFunction:
    try:
        return TargetRegistry.create_target(function, dimension, convex_dim)
    except (StructuralError, UnknownIdentifierError) as exc:
        raise ValueError(exc.message) from exc


def check_architecture_fits(architecture: ArchitectureSpec, target: TargetFunction):
    """Raise ValueError unless the network takes the target's inputs with the right convex split."""
    if architecture.input_dim != target.dimension:
        raise ValueError(
            f"architecture input_dim {architecture.input_dim} does not match {target.function_id}, "
            f"which takes {target.dimension} inputs"
        )
    if architecture.is_partial and architecture.convex_dim != target.convex_dim:
        raise ValueError(
            f"architecture convex_dim {architecture.convex_dim} does not match {target.function_id}, "
            f"which is convex in its last {target.convex_dim} inputs"
        )


class ExperimentConfig(GroupMaxBaseModel):
    """A complete `train` configuration file."""

    architecture: ArchitectureSpec
    training: TrainingBlock = TrainingBlock()
    case: CaseSpec
    output: OutputSpec = OutputSpec()

    @model_validator(mode="after")
    def check_consistency(self) -> "ExperimentConfig":
        check_architecture_fits(self.architecture, self.case.target())
        return self

    def train_config(self) -> TrainConfig:
        return TrainConfig(**self.training.model_dump(), sampler=self.case.sampler, noise_std=self.case.noise_std)

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ExperimentConfig":
        """Load and validate a YAML config. Bad YAML raises ConfigError, bad content a ValidationError."""
        path = Path(path)
        try:
            document = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
        if not isinstance(document, dict):
            raise ConfigError(f"{path}: expected a mapping with architecture, training, case and output blocks")
        return cls.model_validate(document)


class BenchmarkCase(GroupMaxBaseModel):
    """One cell of a benchmark table: a network, a target and the best-of-N protocol."""

    case_id: str
    case: CaseSpec
    architecture: ArchitectureSpec
    training: TrainingBlock
    runs: int = Field(default=10, ge=1)
    eval_samples: int = Field(default_factory=lambda: settings.EVAL_SAMPLES, ge=1)
    eval_seed: int = Field(default_factory=lambda: settings.EVAL_SEED, ge=0)
    seed: int = Field(default=0, ge=0)
    labels: dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_consistency(self) -> "BenchmarkCase":
        check_architecture_fits(self.architecture, self.case.target())
        return self

    def train_config(self, data_seed: int) -> TrainConfig:
        block = self.training.model_dump()
        block["seed"] = data_seed
        return TrainConfig(**block, sampler=self.case.sampler, noise_std=self.case.noise_std)
