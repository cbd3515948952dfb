import numpy as np
import pytest

from groupmax.cuts import Cut, CutSet, denormalize_cut, denormalize_cutset, eval_cutset
from groupmax.training import Normalizer
from groupmax.utils.errors import ShapeMismatchError, StructuralError


def test_eval_cutset_on_points_and_batches():
    cuts = CutSet([[1.0], [-1.0]], [0.0, 0.0])
    assert eval_cutset(cuts, [2.5]) == 2.5
    assert isinstance(eval_cutset(cuts, 0.0), float)
    np.testing.assert_array_equal(eval_cutset(cuts, np.array([-1.0, 0.5, 3.0])), [1.0, 0.5, 3.0])

    planes = CutSet([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0])
    assert eval_cutset(planes, [3.0, 1.0]) == 3.0
    np.testing.assert_array_equal(eval_cutset(planes, [[3.0, 1.0], [0.0, 0.0]]), [3.0, 1.0])
    with pytest.raises(ShapeMismatchError):
        eval_cutset(planes, [1.0, 2.0, 3.0])


def test_cut_sets_validate_their_arrays():
    with pytest.raises(StructuralError):
        CutSet(np.empty((0, 1)), [])
    with pytest.raises(ShapeMismatchError):
        CutSet([[1.0], [2.0]], [0.0])
    with pytest.raises(StructuralError):
        CutSet([[np.inf]], [0.0])
    with pytest.raises(ShapeMismatchError):
        CutSet.from_cuts([Cut([1.0], 0.0), Cut([1.0, 2.0], 0.0)])


def test_equality_ignores_provenance_but_not_the_condition():
    base = CutSet([[1.0]], [0.5], model_hash="a")
    assert base == CutSet([[1.0]], [0.5], model_hash="b")
    assert base != CutSet([[1.0]], [0.5], x_tilde=[0.0])


def test_denormalize_scales_slope_and_intercept():
    norm = Normalizer(input_mean=[0.0], input_std=[2.0], output_mean=0.0, output_std=3.0)
    assert denormalize_cut(Cut([1.0], 0.0), norm) == Cut([1.5], 0.0)


def test_denormalized_cut_is_the_composition(rng):
    norm = Normalizer(input_mean=[1.0, -2.0], input_std=[0.5, 4.0], output_mean=7.0, output_std=2.5)
    cut = Cut([0.3, -1.2], 0.8)
    mapped = denormalize_cut(cut, norm)
    for x in rng.standard_normal((20, 2)):
        expected = norm.output_std * cut(norm.normalize_inputs(x)) + norm.output_mean
        assert mapped(x) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    cuts = CutSet.from_cuts([cut, Cut([1.0, 1.0], -0.5)])
    mapped_set = denormalize_cutset(cuts, norm)
    assert mapped_set.cuts[0](np.ones(2)) == pytest.approx(mapped(np.ones(2)), rel=1e-12)


def test_denormalize_checks_the_dimension():
    with pytest.raises(ShapeMismatchError):
        denormalize_cut(Cut([1.0, 2.0], 0.0), Normalizer.identity(3))
