from typing import Optional

from .base import GroupMaxBaseModel
from .training_schemas import TrainConfig


class TrainSummary(GroupMaxBaseModel):
    """What `train` writes to report.json. Wall time is left out so reruns are byte-identical."""

    kind: str
    model_hash: str
    parameter_count: int
    seed: int
    iterations: int
    final_loss: Optional[float]
    loss_trace: list[tuple[int, float]]
    config: TrainConfig


class RunResult(GroupMaxBaseModel):
    """One run of a benchmark case. `wall_time` covers training plus evaluation."""

    run: int
    init_seed: int
    data_seed: int
    mse: Optional[float]
    diverged: bool = False
    error: Optional[str] = None
    wall_time: float = 0.0


class CaseReport(GroupMaxBaseModel):
    """Best-of-N summary of a benchmark case."""

    case_id: str
    function: str
    architecture: str
    runs: list[RunResult]
    mse_min: Optional[float]
    mse_median: Optional[float]
    mse_max: Optional[float]
    wall_time: float = 0.0

    @property
    def diverged_runs(self) -> int:
        return sum(1 for run in self.runs if run.diverged)
