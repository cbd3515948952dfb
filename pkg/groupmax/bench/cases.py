import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from groupmax.config.settings import settings
from groupmax.networks import get_network
from groupmax.schemas.experiment_schemas import BenchmarkCase
from groupmax.schemas.report_schemas import CaseReport, RunResult
from groupmax.training import FittedModel, fit
from groupmax.utils.errors import NormalizationError, NumericalError
from groupmax.utils.logging import get_logger

from .evaluation import mc_mse

logger = get_logger()


def run_seeds(case: BenchmarkCase) -> list[tuple[int, int]]:
    """(init seed, data seed) for every run, derived from the case seed."""
    state = np.random.SeedSequence(case.seed).generate_state(2 * case.runs)
    return [(int(state[2 * run]), int(state[2 * run + 1])) for run in range(case.runs)]


def fit_run(case: BenchmarkCase, init_seed: int, data_seed: int) -> FittedModel:
    params = get_network(case.architecture.model_copy(update={"seed": init_seed}))
    return fit(params, case.case.target(), case.train_config(data_seed)).model


def evaluate_run(case: BenchmarkCase, run: int, init_seed: int, data_seed: int) -> tuple[RunResult, Optional[FittedModel]]:
    """Train and evaluate one run, timed. Divergence is recorded on the result, never raised."""
    seeds = dict(run=run, init_seed=init_seed, data_seed=data_seed)
    started = time.perf_counter()
    try:
        model = fit_run(case, init_seed, data_seed)
        mse = mc_mse(model, case.case.target(), case.case.sampler, case.eval_samples, case.eval_seed)
    except (NumericalError, NormalizationError) as exc:
        logger.warning(f"{case.case_id} run {run} diverged: {exc.message}")
        elapsed = time.perf_counter() - started
        return RunResult(**seeds, mse=None, diverged=True, error=exc.message, wall_time=elapsed), None
    elapsed = time.perf_counter() - started

    if not np.isfinite(mse):
        logger.warning(f"{case.case_id} run {run} has a non-finite test MSE")
        return RunResult(**seeds, mse=None, diverged=True, error="non-finite MSE", wall_time=elapsed), None
    return RunResult(**seeds, mse=mse, wall_time=elapsed), model


def _run_task(task: tuple[BenchmarkCase, int, int, int]) -> RunResult:
    return evaluate_run(*task)[0]


def summarize(case: BenchmarkCase, results: Sequence[RunResult]) -> CaseReport:
    """Min, median and max over the runs that did not diverge; wall time is the sum of the run timings."""
    scores = [result.mse for result in results if result.mse is not None]
    return CaseReport(
        case_id=case.case_id,
        function=case.case.function,
        architecture=case.architecture.kind,
        runs=list(results),
        mse_min=min(scores) if scores else None,
        mse_median=statistics.median(scores) if scores else None,
        mse_max=max(scores) if scores else None,
        wall_time=sum(result.wall_time for result in results),
    )


def run_cases(cases: Sequence[BenchmarkCase], workers: Optional[int] = None) -> list[CaseReport]:
    """
    Every run of every case, possibly on a process pool.

    Results come back in submission order, so the reports do not depend on the
    number of workers.
    """
    workers = settings.BENCH_WORKERS if workers is None else workers
    tasks = [(case, run, init_seed, data_seed) for case in cases for run, (init_seed, data_seed) in enumerate(run_seeds(case))]

    started = time.perf_counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_task, tasks))
    else:
        results = [_run_task(task) for task in tasks]
    elapsed = time.perf_counter() - started

    reports, offset = [], 0
    for case in cases:
        case_results = results[offset : offset + case.runs]
        offset += case.runs
        report = summarize(case, case_results)
        logger.info(
            f"{case.case_id}: best MSE {report.mse_min} over {case.runs} runs "
            f"({report.diverged_runs} diverged, {report.wall_time:.1f}s)"
        )
        reports.append(report)
    logger.info(f"Ran {len(tasks)} trainings in {elapsed:.1f}s with {workers} worker(s)")
    return reports


def run_case(case: BenchmarkCase, workers: Optional[int] = None) -> CaseReport:
    """Best-of-N: train `runs` models with distinct seeds and evaluate all on the shared eval seed."""
    return run_cases([case], workers)[0]


def best_model(case: BenchmarkCase) -> tuple[Optional[FittedModel], CaseReport]:
    """Like run_case, sequentially, keeping the model with the lowest test MSE."""
    results, best, best_mse = [], None, np.inf
    for run, (init_seed, data_seed) in enumerate(run_seeds(case)):
        result, model = evaluate_run(case, run, init_seed, data_seed)
        results.append(result)
        if result.mse is not None and result.mse < best_mse:
            best, best_mse = model, result.mse
    return best, summarize(case, results)
