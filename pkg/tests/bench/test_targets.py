import numpy as np
import pytest

from groupmax.bench.targets import (
    F10_CONVEX,
    F10_FEATURES,
    SPDSpec,
    TargetFunction,
    TargetRegistry,
    make_spd,
    target_eval,
)
from groupmax.utils.errors import StructuralError, UnknownIdentifierError


@pytest.mark.parametrize(
    ("function_id", "point", "expected"),
    [
        ("f1", [3.0], 9.0),
        ("f2", [2.0], 24.0),
        ("f2", [-1.0], 1.0 + 10.0 * (np.exp(-1.0) - 1.0)),
        ("f3", [1.0], 4.0),
        ("f4", [0.0], 0.0),
        ("f4", [3.0], 3.0),
        ("f4", [4.0], 6.5),
        ("f5", [1.0, 2.0], 12.0),
        ("f6", [1.0, -2.0], 9.0),
        ("f7", [-1.0, 2.0], 3.0),
        ("f7", [1.0, -1.0], 1.0),
        ("f8", [1.0, 2.0, 3.0], 14.0),
    ],
)
def test_target_values(function_id, point, expected):
    assert target_eval(function_id, point) == pytest.approx(expected, rel=1e-12)


def test_f9_at_the_origin_counts_the_coordinates():
    assert target_eval("f9", np.zeros(4)) == pytest.approx(4.0)


def test_f10_splits_features_and_convex_coordinates():
    assert target_eval("f10", [2.0, 2.0, 4.0], dimension=3, convex_dim=1) == pytest.approx(6.0)
    default = TargetRegistry.create_target("f10")
    assert (default.dimension, default.convex_dim) == (F10_FEATURES + F10_CONVEX, F10_CONVEX)
    assert default.is_partial


def test_partial_targets_are_convex_in_their_last_coordinate(rng):
    for function_id in ("f5", "f6", "f7"):
        target = TargetRegistry.create_target(function_id)
        assert target.convex_dim == 1
        x = rng.standard_normal(50)
        y0, y1 = rng.standard_normal(50), rng.standard_normal(50)
        mid = target(np.column_stack([x, (y0 + y1) / 2]))
        ends = (target(np.column_stack([x, y0])) + target(np.column_stack([x, y1]))) / 2
        assert np.all(mid <= ends + 1e-12)


def test_spd_matrices():
    A = make_spd(SPDSpec(dimension=5, seed=1234))
    np.testing.assert_array_equal(A, A.T)
    assert np.linalg.eigvalsh(A).min() >= 0.1 - 1e-12
    np.testing.assert_array_equal(A, make_spd(SPDSpec(dimension=5, seed=1234)))
    A[0, 0] = 100.0
    assert make_spd(SPDSpec(dimension=5, seed=1234))[0, 0] != 100.0


def test_registry_errors_and_registration(monkeypatch):
    with pytest.raises(UnknownIdentifierError):
        TargetRegistry.create_target("f11")
    with pytest.raises(StructuralError):
        TargetRegistry.create_target("f1", dimension=2)
    with pytest.raises(StructuralError):
        TargetRegistry.create_target("f8", dimension=3, convex_dim=1)

    monkeypatch.setattr(TargetRegistry, "_factories", dict(TargetRegistry._factories))
    TargetRegistry.register_target("cube", lambda d, k: TargetFunction("cube", 1, 1, lambda X: X[:, 0] ** 3))
    assert TargetRegistry.is_registered("cube")
    assert target_eval("cube", 2.0) == 8.0
