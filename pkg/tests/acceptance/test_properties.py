"""Properties that must survive training, and byte-level reproducibility of the CLI."""

import numpy as np
import pytest
import yaml
from typer.testing import CliRunner

from groupmax.bench.targets import TargetRegistry
from groupmax.main import cli
from groupmax.networks import build_groupmax, build_icnn, build_maxaffine, build_partial
from groupmax.schemas.training_schemas import SamplerSpec, TrainConfig
from groupmax.training import fit

from tests.networks.helpers import jensen_violation


@pytest.mark.parametrize(
    "params",
    [build_groupmax(1, [10, 10, 10], 5), build_maxaffine(1, 8), build_icnn(1, [10, 10, 10])],
    ids=["groupmax", "maxaffine", "icnn"],
)
def test_convexity_survives_training(params):
    rng = np.random.default_rng(0)
    assert jensen_violation(params.evaluate, rng, 1) <= 0.0

    cfg = TrainConfig(iterations=2000, sampler=SamplerSpec(variance=4.0))
    trained = fit(params, TargetRegistry.create_target("f1"), cfg).model
    assert jensen_violation(trained.predict, rng, 1) <= 0.0


def test_partial_network_stays_convex_in_y():
    p = build_partial(2, 1, 10, 10, 5, 3, seed=4)
    rng = np.random.default_rng(1)
    for x_tilde in rng.standard_normal(10):
        assert jensen_violation(p.evaluate, rng, 1, samples=2000, fixed=[x_tilde]) <= 0.0


def test_cli_outputs_are_byte_identical_across_reruns(tmp_path):
    runner = CliRunner()
    config = {
        "architecture": {"kind": "groupmax", "input_dim": 1, "widths": [6, 6], "group_size": 3},
        "training": {"iterations": 50, "batch_size": 64, "log_every": 10},
        "case": {"function": "f4", "sampler": {"kind": "gaussian", "variance": 4.0}, "noise_std": 1.0},
    }
    path = tmp_path / "experiment.yaml"
    path.write_text(yaml.safe_dump(config), encoding="utf-8")

    outputs = []
    for attempt in ("first", "second"):
        out = tmp_path / attempt
        assert runner.invoke(cli, ["train", str(path), "-o", str(out), "--log-level", "error"]).exit_code == 0
        cuts = runner.invoke(cli, ["cuts", str(out / "model.json"), "--enumerate", "--log-level", "error"])
        assert cuts.exit_code == 0
        outputs.append(
            [(out / name).read_bytes() for name in ("model.json", "report.json", "loss.csv")] + [cuts.stdout]
        )
    assert outputs[0] == outputs[1]
