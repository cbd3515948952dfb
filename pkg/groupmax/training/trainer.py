import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from groupmax.config.settings import settings
from groupmax.diffcore.linalg import as_batch
from groupmax.networks import NetworkParams, load_model, model_hash, save_model
from groupmax.schemas.report_schemas import TrainSummary
from groupmax.schemas.training_schemas import TrainConfig
from groupmax.utils.errors import NumericalError, StructuralError
from groupmax.utils.files import atomic_write_text
from groupmax.utils.logging import get_logger

from .loss import mse_loss
from .normalizer import Normalizer, Target, make_normalizer
from .optimizer import AdamState, adam_step
from .sampling import sample_batch

logger = get_logger()


@dataclass(frozen=True)
class FittedModel:
    """Network parameters together with the normalizer they were trained under."""

    params: NetworkParams
    normalizer: Optional[Normalizer] = None

    def predict(self, X) -> np.ndarray:
        """h in original coordinates, shape (batch,)."""
        X = as_batch(X, self.params.input_dim, name="input")
        if self.normalizer is None:
            return self.params.evaluate(X)
        return self.normalizer.denormalize_outputs(self.params.evaluate(self.normalizer.normalize_inputs(X)))

    def save(self, path: str | Path, case: Optional[dict[str, Any]] = None) -> Path:
        normalizer = self.normalizer.model_dump() if self.normalizer is not None else None
        return save_model(path, self.params, normalizer=normalizer, case=case)

    @classmethod
    def load(cls, path: str | Path) -> tuple["FittedModel", Optional[dict[str, Any]]]:
        """The fitted model and the case block stored with it, if any."""
        model_file = load_model(path)
        normalizer = Normalizer.model_validate(model_file.normalizer) if model_file.normalizer else None
        return cls(params=model_file.params, normalizer=normalizer), model_file.case


@dataclass
class TrainReport:
    model: FittedModel
    config: TrainConfig
    loss_trace: list[tuple[int, float]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def final_loss(self) -> Optional[float]:
        return self.loss_trace[-1][1] if self.loss_trace else None

    def summary(self) -> TrainSummary:
        params = self.model.params
        return TrainSummary(
            kind=params.kind,
            model_hash=model_hash(params),
            parameter_count=params.parameter_count(),
            seed=self.seed,
            iterations=self.config.iterations,
            final_loss=self.final_loss,
            loss_trace=self.loss_trace,
            config=self.config,
        )

    def loss_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.loss_trace, columns=["iteration", "loss"])

    def write_loss_csv(self, path: str | Path) -> Path:
        return atomic_write_text(path, self.loss_frame().to_csv(index=False, float_format="%r", lineterminator="\n"))


def _is_traced(iteration: int, cfg: TrainConfig) -> bool:
    return iteration % cfg.log_every == 0 or iteration == cfg.iterations - 1


def fit(params: NetworkParams, target: Target, cfg: TrainConfig) -> TrainReport:
    """
    Minimize the population MSE with ADAM, a fresh batch every iteration.

    Targets get fresh N(0, noise_std^2) noise. With ``normalize`` the network
    trains in standardized coordinates and the returned FittedModel maps back.
    Fully deterministic in ``cfg.seed`` and the initial parameters.
    """
    if params.input_dim != cfg.sampler.dimension:
        raise StructuralError(
            f"{params.kind} network takes {params.input_dim} inputs, sampler draws {cfg.sampler.dimension}"
        )

    data_seed, normalizer_seed = np.random.SeedSequence(cfg.seed).spawn(2)
    rng = np.random.default_rng(data_seed)
    normalizer = make_normalizer(cfg.sampler, target, cfg.noise_std, seed=normalizer_seed) if cfg.normalize else None

    logger.info(
        f"Fitting {params.kind} ({params.parameter_count()} parameters) for {cfg.iterations} iterations, "
        f"batch {cfg.batch_size}, lr {cfg.learning_rate:g}, normalize={cfg.normalize}"
    )
    started = time.perf_counter()

    theta = dict(params.weights)
    state = AdamState.fresh(theta)
    trace: list[tuple[int, float]] = []

    for iteration in tqdm(range(cfg.iterations), disable=not settings.SHOW_PROGRESS, desc=params.kind):
        X = sample_batch(cfg.sampler, cfg.batch_size, rng)
        values = np.asarray(target(X), dtype=np.float64).reshape(-1)
        if cfg.noise_std > 0:
            values = values + cfg.noise_std * rng.standard_normal(cfg.batch_size)
        if normalizer is not None:
            X, values = normalizer.normalize_inputs(X), normalizer.normalize_targets(values)

        current = params.model_copy(update={"weights": theta})
        loss, grads = mse_loss(current, X, values)
        if not np.isfinite(loss):
            logger.error(f"Loss diverged at iteration {iteration}")
            raise NumericalError(f"loss became non-finite at iteration {iteration}", loss_trace=trace)
        if _is_traced(iteration, cfg):
            trace.append((iteration, loss))
            logger.debug(f"iteration {iteration}: loss {loss:.6g}")

        try:
            theta, state = adam_step(theta, grads, state, iteration + 1, cfg)
        except NumericalError as exc:
            raise NumericalError(exc.message, loss_trace=trace) from exc

    fitted = FittedModel(params=params.with_weights(theta), normalizer=normalizer)
    wall_time = time.perf_counter() - started
    final = f"{trace[-1][1]:.6g}" if trace else "n/a"
    logger.info(f"Fit finished in {wall_time:.2f}s, final batch loss {final}")
    return TrainReport(model=fitted, config=cfg, loss_trace=trace, wall_time=wall_time)
