from .loss import mse_loss
from .normalizer import Normalizer, make_normalizer
from .optimizer import AdamState, adam_step
from .sampling import make_rng, sample_batch
from .trainer import FittedModel, TrainReport, fit

__all__ = [
    "sample_batch",
    "make_rng",
    "Normalizer",
    "make_normalizer",
    "AdamState",
    "adam_step",
    "mse_loss",
    "FittedModel",
    "TrainReport",
    "fit",
]
