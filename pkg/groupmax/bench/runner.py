import time
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from groupmax.config.settings import settings
from groupmax.cuts import CutSet, fitted_enumerate_cuts
from groupmax.schemas.experiment_schemas import BenchmarkCase
from groupmax.schemas.report_schemas import CaseReport
from groupmax.utils.errors import ConfigError
from groupmax.utils.files import atomic_write_text
from groupmax.utils.logging import get_logger

from .cases import best_model, run_cases
from .tables import TableDefinition, TableRegistry

logger = get_logger()

CUT_CHUNK = 4096


def scale_case(case: BenchmarkCase, scale: float = 1.0, runs: Optional[int] = None) -> BenchmarkCase:
    """Shrink iterations and runs by `scale`, each kept at least 1. An explicit `runs` wins."""
    if scale <= 0:
        raise ConfigError(f"must be positive, got {scale}", key="scale")
    iterations = max(1, round(case.training.iterations * scale))
    run_count = runs if runs is not None else max(1, round(case.runs * scale))
    training = case.training.model_copy(update={"iterations": iterations})
    return case.model_copy(update={"training": training, "runs": run_count})


def write_csv(frame: pd.DataFrame, path: Path, index: bool = False) -> Path:
    return atomic_write_text(path, frame.to_csv(index=index, float_format="%r", lineterminator="\n"))


def table_frame(table: TableDefinition, cases: list[BenchmarkCase], reports: list[CaseReport]) -> pd.DataFrame:
    """Best MSE per case pivoted into the table layout, rows and columns in case order."""
    cells = pd.DataFrame(
        [
            {"row": case.labels["row"], "column": case.labels["column"], "mse": report.mse_min}
            for case, report in zip(cases, reports)
        ]
    )
    cells["mse"] = cells["mse"].astype(float)
    grid = cells.pivot(index="row", columns="column", values="mse")
    grid = grid.reindex(index=list(dict.fromkeys(cells["row"])), columns=list(dict.fromkeys(cells["column"])))
    grid.index.name = table.row_header
    grid.columns.name = None
    return grid.reset_index()


def runs_frame(cases: list[BenchmarkCase], reports: list[CaseReport]) -> pd.DataFrame:
    """Every run of every case, long format. Timings are left out so reruns write the same bytes."""
    rows = []
    for case, report in zip(cases, reports):
        for result in report.runs:
            rows.append({"case_id": case.case_id, **case.labels, **result.model_dump(exclude={"wall_time"})})
    return pd.DataFrame(rows)


def timings_frame(cases: list[BenchmarkCase], reports: list[CaseReport]) -> pd.DataFrame:
    """Measured wall time per case, summed over its runs."""
    return pd.DataFrame(
        [
            {"case_id": case.case_id, "runs": len(report.runs), "wall_time": report.wall_time}
            for case, report in zip(cases, reports)
        ]
    )


def supporting_cuts(cuts: CutSet, X: np.ndarray) -> CutSet:
    """The cuts that attain the maximum at some row of X, in enumeration order."""
    best = np.full(X.shape[0], -np.inf)
    winner = np.zeros(X.shape[0], dtype=int)
    for start in range(0, len(cuts), CUT_CHUNK):
        values = X @ cuts.slopes[start : start + CUT_CHUNK].T + cuts.intercepts[start : start + CUT_CHUNK]
        local = np.argmax(values, axis=1)
        local_best = values[np.arange(X.shape[0]), local]
        # strict comparison keeps the lowest index on ties
        improved = local_best > best
        best = np.where(improved, local_best, best)
        winner = np.where(improved, local + start, winner)
    keep = np.unique(winner)
    return CutSet(cuts.slopes[keep], cuts.intercepts[keep], model_hash=cuts.model_hash, enumerated_count=cuts.enumerated_count)


def figure_frame(table: TableDefinition, cases: list[BenchmarkCase]) -> pd.DataFrame:
    """Target, best-of-N prediction and optionally the supporting cuts on a uniform grid."""
    grid = np.linspace(*table.plot_range, table.plot_points)
    X = grid.reshape(-1, 1)
    curves = []
    for case in cases:
        model, _ = best_model(case)
        curve = pd.DataFrame(
            {
                "function": case.labels["function"],
                "variant": case.labels["variant"],
                "x": grid,
                "target": case.case.target()(X),
            }
        )
        if model is None:
            logger.warning(f"{case.case_id}: all {case.runs} runs diverged, prediction left empty")
            curve["prediction"] = np.nan
            curves.append(curve)
            continue

        curve["prediction"] = model.predict(X)
        if table.with_cuts:
            cuts = supporting_cuts(fitted_enumerate_cuts(model), X)
            logger.info(f"{case.case_id}: {len(cuts)} cuts support the curve on {table.plot_range}")
            values = X @ cuts.slopes.T + cuts.intercepts
            curve = pd.concat(
                [curve, pd.DataFrame(values, columns=[f"cut_{j + 1}" for j in range(len(cuts))])],
                axis=1,
            )
        curves.append(curve)
    return pd.concat(curves, ignore_index=True)


def write_notes(table: TableDefinition, output_dir: Path) -> Path:
    logger.warning(f"{table.table_id}: {table.notes}")
    return atomic_write_text(output_dir / f"{table.table_id}.notes.md", f"# {table.table_id}: {table.title}\n\n{table.notes}\n")


def run_table(
    table_id: str,
    runs: Optional[int] = None,
    scale: float = 1.0,
    output_dir: Optional[str | Path] = None,
    workers: Optional[int] = None,
) -> Path:
    """
    Run the grid of a table or figure and write `<id>.csv` to the output directory.

    Tables also get `<id>.runs.csv` with every run, `<id>.timings.csv` with the
    measured wall time per case, and `<id>.notes.md` when the
    table carries an interpretation note. Returns the path of the main CSV.
    """
    table = TableRegistry.get_table(table_id)
    output_dir = Path(output_dir or Path(settings.RESULTS_DIR) / "bench")
    cases = [scale_case(case, scale, runs) for case in table.cases()]
    logger.info(f"Running {table.table_id} ({table.title}): {len(cases)} cases, scale {scale}")

    started = time.perf_counter()
    path = output_dir / f"{table.table_id}.csv"
    if table.is_figure:
        write_csv(figure_frame(table, cases), path)
    else:
        reports = run_cases(cases, workers)
        write_csv(table_frame(table, cases, reports), path)
        write_csv(runs_frame(cases, reports), output_dir / f"{table.table_id}.runs.csv")
        write_csv(timings_frame(cases, reports), output_dir / f"{table.table_id}.timings.csv")
    if table.notes:
        write_notes(table, output_dir)

    logger.info(f"Wrote {path} in {time.perf_counter() - started:.1f}s")
    return path
