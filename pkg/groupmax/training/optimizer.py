from dataclasses import dataclass

import numpy as np

from groupmax.schemas.training_schemas import TrainingBlock
from groupmax.utils.errors import NumericalError

Params = dict[str, np.ndarray]


@dataclass(frozen=True)
class AdamState:
    """First and second moment estimates, one array per weight family."""

    m: Params
    v: Params

    @classmethod
    def fresh(cls, theta: Params) -> "AdamState":
        return cls(
            m={name: np.zeros_like(value) for name, value in theta.items()},
            v={name: np.zeros_like(value) for name, value in theta.items()},
        )


def adam_step(
    theta: Params,
    grads: Params,
    state: AdamState,
    t: int,
    cfg: TrainingBlock,
) -> tuple[Params, AdamState]:
    """
    One ADAM update with bias correction. Pure: inputs are left untouched.

    theta_i <- theta_i - lr * m_hat / (sqrt(v_hat) + eps)
    """
    if t < 1:
        raise ValueError(f"ADAM iteration counter starts at 1, got {t}")
    for name, grad in grads.items():
        if not np.all(np.isfinite(grad)):
            raise NumericalError(f"non-finite gradient for '{name}' at iteration {t}")

    beta1, beta2 = cfg.beta1, cfg.beta2
    correction1 = 1.0 - beta1**t
    correction2 = 1.0 - beta2**t

    new_theta, new_m, new_v = {}, {}, {}
    for name, value in theta.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(value)
        m = beta1 * state.m[name] + (1.0 - beta1) * grad
        v = beta2 * state.v[name] + (1.0 - beta2) * grad * grad
        new_theta[name] = value - cfg.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + cfg.epsilon)
        new_m[name], new_v[name] = m, v
    return new_theta, AdamState(m=new_m, v=new_v)
