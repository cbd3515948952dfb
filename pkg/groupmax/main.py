from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Optional

import numpy as np
import orjson
import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from groupmax import __version__
from groupmax.bench.evaluation import mc_mse
from groupmax.bench.runner import run_table
from groupmax.cuts import (
    CutSet,
    cut_count_report,
    export_cuts,
    fitted_active_cut,
    fitted_conditional_cuts,
    fitted_enumerate_cuts,
    format_cutset,
)
from groupmax.networks import get_network
from groupmax.schemas.experiment_schemas import CaseSpec, ExperimentConfig
from groupmax.training import FittedModel, fit
from groupmax.utils.context import new_run_id
from groupmax.utils.error_handlers import exit_code_for
from groupmax.utils.errors import ConfigError
from groupmax.utils.files import atomic_write_bytes
from groupmax.utils.logging import configure_logging, get_logger

logger = get_logger()

cli = typer.Typer(
    name="groupmax",
    help="Train GroupMax networks, extract their cuts and reproduce the benchmarks.",
    no_args_is_help=True,
    add_completion=False,
)
console = Console()

LogLevel = Annotated[Optional[str], typer.Option("--log-level", help="Override LOG_LEVEL for this command.")]


@contextmanager
def command_scope(name: str, log_level: Optional[str] = None):
    """Fresh run id and logging for one command; exceptions become exit codes."""
    run_id = new_run_id()
    configure_logging(log_level)
    logger.info(f"groupmax {__version__} {name} (run {run_id})")
    try:
        yield
    except (typer.Exit, typer.Abort):
        raise
    except Exception as exc:
        raise typer.Exit(code=exit_code_for(exc)) from exc


def parse_reals(text: str, option: str) -> np.ndarray:
    """Comma-separated reals, e.g. `0.5,-1,2e-3`."""
    try:
        values = [float(token) for token in text.split(",") if token.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated reals, got '{text}'", key=option) from exc
    if not values:
        raise ConfigError("no values given", key=option)
    return np.array(values, dtype=np.float64)


def parse_counts(text: str, option: str) -> list[int]:
    """Comma-separated positive integers, e.g. `1,2,3`."""
    try:
        values = [int(token) for token in text.split(",") if token.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got '{text}'", key=option) from exc
    if not values:
        raise ConfigError("no values given", key=option)
    if min(values) < 1:
        raise ConfigError(f"values must be at least 1, got '{text}'", key=option)
    return values


def emit_cuts(cuts: CutSet, output: Optional[Path]):
    if output is None:
        typer.echo(format_cutset(cuts), nl=False)
    else:
        export_cuts(cuts, output)


@cli.command()
def train(
    config: Annotated[Path, typer.Argument(help="YAML experiment config.")],
    output_dir: Annotated[Optional[Path], typer.Option("--output-dir", "-o", help="Overrides output.directory.")] = None,
    log_level: LogLevel = None,
):
    """Train the configured network and write the model file, report and loss trace."""
    with command_scope("train", log_level):
        experiment = ExperimentConfig.from_yaml(config)
        params = get_network(experiment.architecture)
        report = fit(params, experiment.case.target(), experiment.train_config())

        out = experiment.output
        model_path = report.model.save(out.path("model_file", output_dir), case=experiment.case.model_dump())
        summary = report.summary()
        atomic_write_bytes(
            out.path("report_file", output_dir),
            orjson.dumps(summary.model_dump(), option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE),
        )
        report.write_loss_csv(out.path("loss_file", output_dir))

        logger.info(f"Trained {summary.kind} in {report.wall_time:.1f}s, final loss {summary.final_loss}")
        console.print(f"[bold]{summary.kind}[/bold] model {summary.model_hash[:12]} written to {model_path}")


@cli.command()
def cuts(
    model: Annotated[Path, typer.Argument(help="Model file written by `train`.")],
    at: Annotated[Optional[str], typer.Option("--at", help="Active cut at this point (convex coordinates).")] = None,
    enumerate_all: Annotated[bool, typer.Option("--enumerate", help="Enumerate every cut of a convex network.")] = False,
    conditional: Annotated[
        Optional[str], typer.Option("--conditional", help="Frozen x_tilde of a partially convex network.")
    ] = None,
    cap: Annotated[Optional[int], typer.Option("--cap", min=1, help="Enumeration cap; defaults to CUT_ENUMERATION_CAP.")] = None,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="Cut file to write; stdout if omitted.")] = None,
    log_level: LogLevel = None,
):
    """
    Extract cuts from a trained model.

    --at gives the active cut at a point (with --conditional for partial
    networks), --enumerate the full cut set, --conditional alone the cut set
    at a frozen x_tilde. Values are in original coordinates.
    """
    with command_scope("cuts", log_level):
        if enumerate_all and (at is not None or conditional is not None):
            raise ConfigError("--enumerate cannot be combined with --at or --conditional", key="cuts")
        if not enumerate_all and at is None and conditional is None:
            raise ConfigError("pass one of --at, --enumerate or --conditional", key="cuts")

        fitted, _ = FittedModel.load(model)
        x_tilde = parse_reals(conditional, "--conditional") if conditional is not None else None
        if at is not None:
            cut = fitted_active_cut(fitted, parse_reals(at, "--at"), x_tilde)
            result = CutSet.from_cuts([cut], x_tilde=x_tilde)
        elif enumerate_all:
            result = fitted_enumerate_cuts(fitted, cap=cap)
        else:
            result = fitted_conditional_cuts(fitted, x_tilde, cap=cap)
        emit_cuts(result, output)


@cli.command()
def bench(
    table_id: Annotated[str, typer.Argument(help="T1..T10 or F1..F4.")],
    runs: Annotated[Optional[int], typer.Option("--runs", min=1, help="Runs per case; overrides the table default.")] = None,
    scale: Annotated[float, typer.Option("--scale", help="Multiplies iterations and runs.")] = 1.0,
    output_dir: Annotated[Optional[Path], typer.Option("--output-dir", "-o", help="Defaults to RESULTS_DIR/bench.")] = None,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1, help="Overrides BENCH_WORKERS.")] = None,
    log_level: LogLevel = None,
):
    """Run a benchmark table or figure and write its CSV."""
    with command_scope("bench", log_level):
        path = run_table(table_id, runs=runs, scale=scale, output_dir=output_dir, workers=workers)
        console.print(f"{table_id} written to {path}")


@cli.command(name="eval")
def evaluate(
    model: Annotated[Path, typer.Argument(help="Model file written by `train`.")],
    config: Annotated[Optional[Path], typer.Option("--config", help="Take the case from this config.")] = None,
    samples: Annotated[Optional[int], typer.Option("--samples", min=1, help="Defaults to EVAL_SAMPLES.")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", min=0, help="Defaults to EVAL_SEED.")] = None,
    log_level: LogLevel = None,
):
    """Print the Monte Carlo test MSE of a saved model on its case."""
    with command_scope("eval", log_level):
        fitted, stored_case = FittedModel.load(model)
        if config is not None:
            case = ExperimentConfig.from_yaml(config).case
        elif stored_case is not None:
            case = CaseSpec.model_validate(stored_case)
        else:
            raise ConfigError(f"{model} has no stored case; pass --config", key="eval")

        mse = mc_mse(fitted, case.target(), case.sampler, n=samples, eval_seed=seed)
        logger.info(f"{case.function} on {case.sampler.label()}: MSE {mse!r}")
        typer.echo(repr(mse))


@cli.command(name="cut-count")
def cut_count(
    width: Annotated[int, typer.Argument(min=1, help="Neurons per layer (M).")],
    group_size: Annotated[int, typer.Argument(min=1, help="Group size (G).")],
    depths: Annotated[str, typer.Option("--depths", help="Comma-separated depths q.")] = "1,2,3",
    cap: Annotated[Optional[int], typer.Option("--cap", min=1)] = None,
    log_level: LogLevel = None,
):
    """Compare enumerated cut counts with M * G^(K(q-1)) on a constant-width network."""
    with command_scope("cut-count", log_level):
        q_values = parse_counts(depths, "--depths")
        frame = cut_count_report(width, group_size, q_values, cap=cap)

        table = Table(title=f"Cut counts, M={width}, G={group_size}")
        for column in frame.columns:
            table.add_column(str(column))
        for row in frame.itertuples(index=False):
            table.add_row(*("-" if pd.isna(value) else str(value) for value in row))
        console.print(table)


if __name__ == "__main__":
    cli()
