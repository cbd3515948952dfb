import numpy as np
import pytest

from groupmax.bench.cases import best_model, run_case, run_cases, run_seeds, summarize
from groupmax.bench.evaluation import mc_mse
from groupmax.bench.tables import gaussian, groupmax, make_case, maxaffine
from groupmax.bench.targets import TargetFunction, TargetRegistry
from groupmax.networks import get_network
from groupmax.schemas.report_schemas import RunResult


def small_case(case_id="c", function="f1", iterations=0, runs=1, arch=None):
    case = make_case(case_id, function, gaussian(1, 4.0), arch or groupmax(1, [4, 2], 2), iterations, runs=runs)
    return case.model_copy(update={"eval_samples": 5000})


def test_run_seeds_are_distinct_and_reproducible():
    case = small_case(runs=5)
    seeds = run_seeds(case)
    assert len(seeds) == 5
    assert len({seed for pair in seeds for seed in pair}) == 10
    assert seeds == run_seeds(case)
    assert seeds != run_seeds(case.model_copy(update={"seed": 1}))


def test_untrained_run_scores_the_initial_network():
    case = small_case()
    report = run_case(case, workers=1)
    init_seed, _ = run_seeds(case)[0]
    params = get_network(case.architecture.model_copy(update={"seed": init_seed}))
    expected = mc_mse(params, case.case.target(), case.case.sampler, case.eval_samples, case.eval_seed)
    assert report.mse_min == expected
    assert report.mse_median == expected
    assert report.runs[0].init_seed == init_seed
    assert not report.runs[0].diverged


def test_diverged_runs_are_recorded(monkeypatch):
    monkeypatch.setattr(TargetRegistry, "_factories", dict(TargetRegistry._factories))
    TargetRegistry.register_target(
        "broken", lambda d, k: TargetFunction("broken", 1, 1, lambda X: np.full(X.shape[0], np.nan))
    )
    report = run_case(small_case(function="broken", iterations=2, runs=2), workers=1)
    assert report.diverged_runs == 2
    assert report.mse_min is None
    assert all(run.error for run in report.runs)


def test_summary_statistics():
    case = small_case(runs=4)
    results = [
        RunResult(run=0, init_seed=1, data_seed=2, mse=3.0, wall_time=0.5),
        RunResult(run=1, init_seed=3, data_seed=4, mse=1.0, wall_time=1.25),
        RunResult(run=2, init_seed=5, data_seed=6, mse=None, diverged=True, error="x", wall_time=0.25),
        RunResult(run=3, init_seed=7, data_seed=8, mse=2.0, wall_time=2.0),
    ]
    report = summarize(case, results)
    assert (report.mse_min, report.mse_median, report.mse_max) == (1.0, 2.0, 3.0)
    assert report.diverged_runs == 1
    assert report.wall_time == 4.0


def test_case_wall_time_is_measured_per_run():
    report = run_case(small_case(iterations=3, runs=3), workers=1)
    assert all(run.wall_time > 0 for run in report.runs)
    assert report.wall_time == pytest.approx(sum(run.wall_time for run in report.runs))


def test_diverged_runs_are_timed_too(monkeypatch):
    monkeypatch.setattr(TargetRegistry, "_factories", dict(TargetRegistry._factories))
    TargetRegistry.register_target(
        "broken", lambda d, k: TargetFunction("broken", 1, 1, lambda X: np.full(X.shape[0], np.nan))
    )
    report = run_case(small_case(function="broken", iterations=2), workers=1)
    assert report.runs[0].diverged
    assert report.runs[0].wall_time > 0


def test_reports_do_not_depend_on_the_worker_count():
    cases = [small_case("a", iterations=3, runs=2), small_case("b", "f4", iterations=3, runs=1, arch=maxaffine(1, 3))]
    sequential = run_cases(cases, workers=1)
    parallel = run_cases(cases, workers=2)
    assert [r.case_id for r in parallel] == ["a", "b"]
    assert [[run.mse for run in r.runs] for r in parallel] == [[run.mse for run in r.runs] for r in sequential]


def test_best_model_keeps_the_lowest_error():
    case = small_case(iterations=5, runs=3)
    model, report = best_model(case)
    assert model is not None
    best = mc_mse(model, case.case.target(), case.case.sampler, case.eval_samples, case.eval_seed)
    assert best == pytest.approx(report.mse_min)
    assert len(report.runs) == 3
