import pytest
import yaml
from loguru import logger
from typer.testing import CliRunner


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def release_log_sinks():
    """The CLI installs a sink on the runner's stderr; drop it once the test is done."""
    yield
    logger.remove()


@pytest.fixture
def write_config(tmp_path):
    def write(document: dict, name: str = "experiment.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(document), encoding="utf-8")
        return path

    return write


@pytest.fixture
def groupmax_config(tmp_path):
    return {
        "architecture": {"kind": "groupmax", "input_dim": 1, "widths": [4, 4], "group_size": 2},
        "training": {"iterations": 20, "batch_size": 32, "log_every": 5},
        "case": {"function": "f1", "sampler": {"kind": "gaussian", "variance": 4.0}},
        "output": {"directory": str(tmp_path / "out")},
    }
