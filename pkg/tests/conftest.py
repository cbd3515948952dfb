import numpy as np
import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

hypothesis_settings.register_profile(
    "groupmax",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("groupmax")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-length training tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    """Point RESULTS_DIR at a temporary directory."""
    from groupmax.config.settings import settings

    monkeypatch.setattr(settings, "RESULTS_DIR", str(tmp_path / "results"))
    return tmp_path / "results"
