from groupmax.diffcore import Tape, backward


def network_loss(params, X, targets):
    """MSE of `params` on (X, targets) as a function of its weights, for finite_diff_check."""

    def f(theta):
        candidate = params.with_weights(theta)
        tape = Tape()
        out = candidate.forward(tape, X)
        loss = tape.mse(out, targets.reshape(out.shape))
        return float(loss.value), backward(tape), tape.min_gap

    return f
