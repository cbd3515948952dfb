import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupmax.cuts import enumerate_cuts
from groupmax.networks import GroupMaxParams, build_groupmax, build_maxaffine, embed_maxaffine, forward_groupmax
from groupmax.utils.errors import ShapeMismatchError, StructuralError

from .helpers import jensen_violation, kink_count, perturbed, second_differences, segment_profile

SHAPES = [([5], 1), ([4, 2], 2), ([6, 6], 2), ([6, 6, 4], 3)]


def abs_network() -> GroupMaxParams:
    return GroupMaxParams(
        d=1,
        widths=(2, 2),
        group_size=1,
        weights={"A1": [[1.0], [-1.0]], "B1": [0.0, 0.0], "A2": np.eye(2), "B2": [0.0, 0.0]},
    )


def test_parameter_count_matches_layer_sum():
    # M1 (d + 1) + sum_j M_j (K_{j-1} + 1)
    assert build_groupmax(1, [9, 9, 9], 3).parameter_count() == 9 * 2 + 9 * 4 + 9 * 4


def test_single_layer_is_max_affine_shaped():
    p = build_groupmax(2, [4], 4)
    assert p.parameter_count() == 12
    assert p.weight_shapes() == {"A1": (4, 2), "B1": (4,)}


def test_same_seed_gives_identical_parameters():
    first, second = build_groupmax(3, [6, 6], 2, seed=11), build_groupmax(3, [6, 6], 2, seed=11)
    for name in first.weights:
        np.testing.assert_array_equal(first.weights[name], second.weights[name])
    assert not np.array_equal(first.weights["A1"], build_groupmax(3, [6, 6], 2, seed=12).weights["A1"])


def test_group_size_must_divide_hidden_widths():
    with pytest.raises(StructuralError):
        build_groupmax(2, [5, 4], 2)
    # the last layer feeds the global max and is unconstrained
    assert build_groupmax(2, [4, 5], 2).widths == (4, 5)


def test_constructed_absolute_value():
    p = abs_network()
    assert forward_groupmax(p, [3.0])[0] == 3.0
    assert forward_groupmax(p, [-2.0])[0] == 2.0


def test_constant_network():
    p = GroupMaxParams(
        d=2,
        widths=(4, 3),
        group_size=2,
        weights={"A1": np.zeros((4, 2)), "B1": np.zeros(4), "A2": np.zeros((3, 2)), "B2": [0.5, -1.0, 2.5]},
    )
    np.testing.assert_array_equal(p.evaluate(np.random.default_rng(0).standard_normal((10, 2))), np.full(10, 2.5))


def test_evaluate_matches_single_point_forward(rng):
    p = build_groupmax(2, [6, 6, 3], 3, seed=1)
    X = rng.standard_normal((20, 2))
    batch = p.evaluate(X)
    singles = [forward_groupmax(p, x)[0] for x in X]
    np.testing.assert_allclose(singles, batch, rtol=0, atol=1e-12)


def test_negative_mixing_weights_are_clamped_in_the_forward_pass(rng):
    p = build_groupmax(2, [4, 2], 2, seed=3)
    weights = dict(p.weights)
    weights["A2"] = -np.abs(weights["A2"])
    clamped = p.with_weights(weights)
    # every clamped weight is zero, so only B2 survives
    np.testing.assert_array_equal(clamped.evaluate(rng.standard_normal((5, 2))), np.full(5, np.max(weights["B2"])))


@pytest.mark.parametrize("widths, group_size", [([8, 8], 2), ([6, 6, 6], 3), ([10, 10, 10], 5), ([5], 1)])
def test_convex_in_the_input(widths, group_size, rng):
    p = build_groupmax(2, widths, group_size, seed=7)
    weights = {name: value + 0.3 * rng.standard_normal(value.shape) for name, value in p.weights.items()}
    assert jensen_violation(p.with_weights(weights).evaluate, rng, dim=2) <= 0.0


@pytest.mark.parametrize("depth, group_size", [(1, 2), (2, 2), (3, 3), (4, 1)])
def test_max_affine_embedding_is_exact(depth, group_size, rng):
    ma = build_maxaffine(3, 5, seed=2)
    embedded = embed_maxaffine(ma, depth, group_size)
    assert embedded.depth == depth
    X = rng.standard_normal((200, 3))
    np.testing.assert_allclose(embedded.evaluate(X), ma.evaluate(X), rtol=0, atol=1e-12)


def test_wrong_weight_shape_is_rejected():
    p = build_groupmax(2, [4, 2], 2)
    weights = dict(p.weights)
    weights["A2"] = np.ones((2, 3))
    with pytest.raises(ShapeMismatchError):
        p.with_weights(weights)


def test_missing_or_non_finite_weights_are_rejected():
    p = build_groupmax(2, [4, 2], 2)
    with pytest.raises(StructuralError, match="missing"):
        p.with_weights({name: value for name, value in p.weights.items() if name != "B2"})
    weights = dict(p.weights)
    weights["B1"] = np.array([0.0, np.nan, 0.0, 0.0])
    with pytest.raises(StructuralError, match="non-finite"):
        p.with_weights(weights)


def test_input_dimension_is_checked():
    with pytest.raises(ShapeMismatchError):
        build_groupmax(3, [4], 2).evaluate(np.zeros((2, 2)))


@pytest.mark.parametrize("widths, group_size", SHAPES)
@given(seed=st.integers(0, 2**16), c=st.floats(0.1, 10.0))
def test_scaling_the_affine_path_scales_the_output(widths, group_size, seed, c):
    rng = np.random.default_rng(seed)
    p = perturbed(build_groupmax(2, widths, group_size, seed=seed), rng)
    weights = dict(p.weights)
    weights["A1"] = c * weights["A1"]
    for j in range(1, p.depth + 1):
        weights[f"B{j}"] = c * weights[f"B{j}"]

    X = 2.0 * rng.standard_normal((100, 2))
    np.testing.assert_allclose(p.with_weights(weights).evaluate(X), c * p.evaluate(X), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("widths, group_size", SHAPES)
@given(seed=st.integers(0, 2**16))
def test_restriction_to_a_segment_is_convex_and_piecewise_affine(widths, group_size, seed):
    rng = np.random.default_rng(seed)
    p = perturbed(build_groupmax(2, widths, group_size, seed=seed), rng)
    start, end = rng.uniform(-3, 3, size=(2, 2))
    values = segment_profile(p.evaluate, start, end)

    second, tolerance = second_differences(values)
    assert np.all(second >= -tolerance)
    # every affine piece met along the segment is one of the cuts
    assert kink_count(values) + 1 <= len(enumerate_cuts(p))
