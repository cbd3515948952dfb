import numpy as np
import orjson
import pytest
from pydantic import ValidationError

from groupmax.networks import (
    NetworkRegistry,
    build_groupmax,
    build_partial,
    get_network,
    load_model,
    model_hash,
    parse_model,
    save_model,
)
from groupmax.networks.serialization import dump_model
from groupmax.schemas.network_schemas import ArchitectureSpec
from groupmax.utils.errors import ModelFileError, UnknownIdentifierError

SPECS = [
    ArchitectureSpec(kind="groupmax", input_dim=2, widths=[6, 6, 3], group_size=3),
    ArchitectureSpec(kind="maxaffine", input_dim=2, cuts=5),
    ArchitectureSpec(kind="icnn", input_dim=2, widths=[4, 4]),
    ArchitectureSpec(kind="mlp", input_dim=2, widths=[4, 4], activation="tanh"),
    ArchitectureSpec(
        kind="partial_groupmax", input_dim=2, convex_dim=1, feedforward_width=4, convex_width=4, group_size=2, depth=3
    ),
    ArchitectureSpec(kind="partial_icnn", input_dim=2, convex_dim=1, feedforward_width=4, convex_width=4, depth=2),
]


@pytest.mark.parametrize("spec", SPECS, ids=[spec.kind for spec in SPECS])
def test_every_kind_builds_and_survives_a_model_file(spec, tmp_path, rng):
    params = get_network(spec)
    assert params.kind == spec.kind
    assert params.input_dim == 2

    path = save_model(tmp_path / "model.json", params, case={"function": "f5"})
    loaded = load_model(path)
    assert loaded.case == {"function": "f5"}
    assert model_hash(loaded.params) == model_hash(params)
    X = rng.standard_normal((25, 2))
    np.testing.assert_array_equal(loaded.params.evaluate(X), params.evaluate(X))


def test_registry_lists_every_kind():
    kinds = NetworkRegistry.list_registered_kinds()
    assert set(kinds) == {"groupmax", "partial_groupmax", "maxaffine", "icnn", "partial_icnn", "mlp"}
    assert NetworkRegistry.is_registered("groupmax")
    with pytest.raises(UnknownIdentifierError):
        NetworkRegistry.params_class("resnet")


def test_seed_lives_in_the_architecture():
    spec = SPECS[0]
    first = get_network(spec.model_copy(update={"seed": 1}))
    second = get_network(spec.model_copy(update={"seed": 2}))
    assert model_hash(first) != model_hash(second)
    assert model_hash(first) == model_hash(get_network(spec.model_copy(update={"seed": 1})))


@pytest.mark.parametrize(
    "block",
    [
        {"kind": "groupmax", "input_dim": 2, "widths": [5, 4], "group_size": 2},
        {"kind": "groupmax", "input_dim": 2},
        {"kind": "maxaffine", "input_dim": 1},
        {"kind": "partial_groupmax", "input_dim": 2, "convex_dim": 2, "feedforward_width": 4, "convex_width": 4, "depth": 2},
        {"kind": "partial_icnn", "input_dim": 3, "convex_dim": 1, "feedforward_width": 4, "depth": 2},
        {"kind": "groupmax", "input_dim": 1, "widths": [4], "group_size": 2, "stride": 1},
        {"kind": "transformer", "input_dim": 1},
    ],
)
def test_invalid_architecture_blocks_fail_validation(block):
    with pytest.raises(ValidationError):
        ArchitectureSpec.model_validate(block)


def test_model_files_are_byte_stable():
    params = build_partial(3, 1, 4, 4, 2, 2, seed=3)
    assert dump_model(params) == dump_model(params.with_weights(dict(params.weights)))


def test_model_file_errors():
    good = dump_model(build_groupmax(1, [4, 2], 2))
    with pytest.raises(ModelFileError, match="not valid JSON"):
        parse_model(b"{not json")
    with pytest.raises(ModelFileError, match="unsupported version"):
        parse_model(good.replace(b'"version": 1', b'"version": 7'))

    document = orjson.loads(good)
    document["weights"]["A2"]["shape"] = [4, 2]
    document["weights"]["A2"]["data"] = [0.0] * 8
    with pytest.raises(ModelFileError, match="inconsistent"):
        parse_model(orjson.dumps(document))

    document = orjson.loads(good)
    document["kind"] = "resnet"
    with pytest.raises(ModelFileError):
        parse_model(orjson.dumps(document))


def test_missing_model_file(tmp_path):
    with pytest.raises(ModelFileError, match="does not exist"):
        load_model(tmp_path / "absent.json")
