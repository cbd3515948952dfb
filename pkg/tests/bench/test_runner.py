import numpy as np
import pandas as pd
import pytest

from groupmax.bench import runner
from groupmax.bench.runner import run_table, scale_case, supporting_cuts, table_frame
from groupmax.bench.tables import TableDefinition, TableRegistry, gaussian, groupmax, make_case, maxaffine
from groupmax.cuts import CutSet
from groupmax.schemas.report_schemas import CaseReport
from groupmax.utils.errors import ConfigError, UnknownIdentifierError


def tiny(case_id, function, arch, runs=2, **labels):
    case = make_case(case_id, function, gaussian(1, 4.0), arch, 5, runs=runs, **labels)
    return case.model_copy(update={"eval_samples": 2000})


@pytest.fixture
def registry(monkeypatch):
    monkeypatch.setattr(TableRegistry, "_tables", dict(TableRegistry._tables))
    return TableRegistry


def test_scale_case():
    case = make_case("c", "f1", gaussian(1), groupmax(1, [4, 2], 2), 50_000)
    scaled = scale_case(case, 0.001)
    assert (scaled.training.iterations, scaled.runs) == (50, 1)
    assert scale_case(case, 0.001, runs=3).runs == 3
    assert scale_case(case, 1e-9).training.iterations == 1
    with pytest.raises(ConfigError):
        scale_case(case, 0.0)


def test_table_frame_keeps_case_order():
    table = TableDefinition("TX", "tiny", build=list, row_header="q")
    cases = [
        tiny("a", "f1", groupmax(1, [4, 2], 2), row="3", column="f4"),
        tiny("b", "f1", groupmax(1, [4, 2], 2), row="3", column="f1"),
        tiny("c", "f1", groupmax(1, [4, 2], 2), row="2", column="f4"),
    ]
    reports = [
        CaseReport(case_id=c.case_id, function="f1", architecture="groupmax", runs=[], mse_min=v, mse_median=v, mse_max=v)
        for c, v in zip(cases, (1.0, 2.0, None))
    ]
    frame = table_frame(table, cases, reports)
    assert list(frame.columns) == ["q", "f4", "f1"]
    assert list(frame["q"]) == ["3", "2"]
    assert frame.loc[0, "f4"] == 1.0 and frame.loc[0, "f1"] == 2.0
    assert np.isnan(frame.loc[1, "f4"]) and np.isnan(frame.loc[1, "f1"])


@pytest.mark.parametrize("chunk", [1, 4096])
def test_supporting_cuts(monkeypatch, chunk):
    monkeypatch.setattr(runner, "CUT_CHUNK", chunk)
    cuts = CutSet([[1.0], [-1.0], [0.0]], [0.0, 0.0, -5.0], model_hash="m")
    kept = supporting_cuts(cuts, np.array([[-1.0], [0.0], [1.0]]))
    assert kept == CutSet([[1.0], [-1.0]], [0.0, 0.0])
    assert kept.model_hash == "m"


def test_run_table_writes_the_grid(registry, results_dir):
    registry.register_table(
        TableDefinition(
            "TX",
            "tiny",
            build=lambda: [
                tiny("TX-g-f1", "f1", groupmax(1, [4, 2], 2), row="groupmax", column="f1"),
                tiny("TX-m-f1", "f1", maxaffine(1, 3), row="maxaffine", column="f1"),
            ],
            notes="read me",
        )
    )
    path = run_table("TX", workers=1)
    output_dir = results_dir / "bench"
    assert path == output_dir / "TX.csv"

    frame = pd.read_csv(path)
    assert list(frame.columns) == ["network", "f1"]
    assert list(frame["network"]) == ["groupmax", "maxaffine"]
    assert np.all(np.isfinite(frame["f1"]))

    runs = pd.read_csv(output_dir / "TX.runs.csv")
    assert len(runs) == 4
    assert set(runs["case_id"]) == {"TX-g-f1", "TX-m-f1"}
    assert "wall_time" not in runs.columns
    timings = pd.read_csv(output_dir / "TX.timings.csv")
    assert list(timings["case_id"]) == ["TX-g-f1", "TX-m-f1"]
    assert list(timings["runs"]) == [2, 2]
    assert np.all(timings["wall_time"] > 0)
    assert "read me" in (output_dir / "TX.notes.md").read_text()


def test_rerunning_a_table_writes_identical_bytes(registry, tmp_path):
    registry.register_table(
        TableDefinition(
            "TY",
            "rerun",
            build=lambda: [
                tiny("TY-g-f4", "f4", groupmax(1, [4, 2], 2), row="groupmax", column="f4"),
                tiny("TY-m-f4", "f4", maxaffine(1, 3), row="maxaffine", column="f4"),
            ],
        )
    )
    first = run_table("TY", output_dir=tmp_path / "first", workers=1)
    second = run_table("TY", output_dir=tmp_path / "second", workers=2)
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / "first" / "TY.runs.csv").read_bytes() == (tmp_path / "second" / "TY.runs.csv").read_bytes()


def test_run_table_dumps_figures_with_cuts(registry, tmp_path):
    registry.register_table(
        TableDefinition(
            "FX",
            "tiny figure",
            build=lambda: [tiny("FX-f4", "f4", groupmax(1, [4, 4], 2), runs=1, function="f4", variant="groupmax")],
            kind="figure",
            with_cuts=True,
            plot_points=21,
        )
    )
    frame = pd.read_csv(run_table("FX", output_dir=tmp_path), float_precision="round_trip")
    assert list(frame.columns[:5]) == ["function", "variant", "x", "target", "prediction"]
    assert len(frame) == 21
    cut_columns = [column for column in frame.columns if column.startswith("cut_")]
    assert cut_columns
    np.testing.assert_allclose(frame[cut_columns].max(axis=1), frame["prediction"], rtol=1e-10, atol=1e-10)


def test_unknown_table_id(tmp_path):
    with pytest.raises(UnknownIdentifierError):
        run_table("T99", output_dir=tmp_path)
