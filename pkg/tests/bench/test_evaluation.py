import numpy as np
import pytest

from groupmax.bench.evaluation import as_predictor, mc_mse
from groupmax.bench.targets import TargetRegistry
from groupmax.networks import build_groupmax
from groupmax.schemas.training_schemas import SamplerSpec


def test_exact_model_has_zero_error():
    identity = lambda X: X[:, 0]  # noqa: E731
    assert mc_mse(identity, identity, SamplerSpec(), n=1000, eval_seed=0) == 0.0


def test_constant_predictor_on_f1():
    constant = lambda X: np.full(X.shape[0], 4.0)  # noqa: E731
    mse = mc_mse(constant, TargetRegistry.create_target("f1"), SamplerSpec(variance=4.0), n=1_000_000, eval_seed=1)
    assert mse == pytest.approx(32.0, abs=0.5)


def test_estimate_depends_on_the_seed_only():
    params = build_groupmax(1, [4, 2], 2)
    target = TargetRegistry.create_target("f4")
    first = mc_mse(params, target, SamplerSpec(), n=5000, eval_seed=3)
    assert first == mc_mse(params, target, SamplerSpec(), n=5000, eval_seed=3)
    assert first != mc_mse(params, target, SamplerSpec(), n=5000, eval_seed=4)


def test_invalid_requests():
    with pytest.raises(ValueError):
        mc_mse(lambda X: X[:, 0], lambda X: X[:, 0], SamplerSpec(), n=0)
    with pytest.raises(TypeError):
        as_predictor(42)


def test_spread_across_seeds_shrinks_like_one_over_root_n():
    params = build_groupmax(1, [4, 2], 2, seed=3)
    target = TargetRegistry.create_target("f4")
    sampler = SamplerSpec(kind="uniform", lo=-2.0, hi=2.0)
    sizes = np.array([500, 2000, 8000, 32000])
    spreads = [np.std([mc_mse(params, target, sampler, n=int(n), eval_seed=seed) for seed in range(20)], ddof=1) for n in sizes]

    slope = np.polyfit(np.log(sizes), np.log(spreads), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.17)
    # 64 times the samples, an eighth of the spread
    assert 4.0 < spreads[0] / spreads[-1] < 16.0
