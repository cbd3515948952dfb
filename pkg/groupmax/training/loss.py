import numpy as np

from groupmax.diffcore import Tape, backward
from groupmax.diffcore.linalg import as_batch
from groupmax.networks import NetworkParams
from groupmax.utils.errors import ShapeMismatchError


def mse_loss(params: NetworkParams, X, targets) -> tuple[float, dict[str, np.ndarray]]:
    """Mean of (target - h)^2 over the batch and its gradient for every weight family."""
    X = as_batch(X, params.input_dim, name="batch")
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if targets.shape[0] != X.shape[0]:
        raise ShapeMismatchError(f"{X.shape[0]} points but {targets.shape[0]} targets")

    tape = Tape()
    out = params.forward(tape, X)
    loss = tape.mse(out, targets.reshape(out.shape))
    grads = backward(tape)
    return float(loss.value), {name: grads[name] for name in params.weights}
