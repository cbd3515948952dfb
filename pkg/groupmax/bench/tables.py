"""
Experiment grids for every benchmark table and figure.

Table cases carry `row` and `column` labels which the runner pivots into the
CSV. Figure cases carry `function` and `variant` labels and are dumped as
curves on a uniform grid.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Literal, Optional

from groupmax.schemas.experiment_schemas import BenchmarkCase, CaseSpec
from groupmax.schemas.network_schemas import ArchitectureSpec
from groupmax.schemas.training_schemas import SamplerSpec, TrainingBlock
from groupmax.utils.errors import UnknownIdentifierError
from groupmax.utils.logging import get_logger

logger = get_logger()

ONE_D_FUNCTIONS = ("f1", "f2", "f3", "f4")
PARTIAL_FUNCTIONS = ("f5", "f6", "f7")
PLOT_RANGE = (-6.0, 6.0)
PLOT_POINTS = 401


@dataclass(frozen=True)
class TableDefinition:
    table_id: str
    title: str
    build: Callable[[], list[BenchmarkCase]]
    row_header: str = "network"
    kind: Literal["table", "figure"] = "table"
    notes: Optional[str] = None
    with_cuts: bool = False
    plot_range: tuple[float, float] = PLOT_RANGE
    plot_points: int = PLOT_POINTS

    @property
    def is_figure(self) -> bool:
        return self.kind == "figure"

    def cases(self) -> list[BenchmarkCase]:
        return self.build()


def gaussian(dimension: int, variance: float = 1.0) -> SamplerSpec:
    return SamplerSpec(kind="gaussian", dimension=dimension, variance=variance)


def uniform(dimension: int, lo: float = -2.0, hi: float = 2.0) -> SamplerSpec:
    return SamplerSpec(kind="uniform", dimension=dimension, lo=lo, hi=hi)


def groupmax(d: int, widths: list[int], group_size: int) -> ArchitectureSpec:
    return ArchitectureSpec(kind="groupmax", input_dim=d, widths=widths, group_size=group_size)


def icnn(d: int, widths: list[int]) -> ArchitectureSpec:
    return ArchitectureSpec(kind="icnn", input_dim=d, widths=widths)


def mlp(d: int, widths: list[int]) -> ArchitectureSpec:
    return ArchitectureSpec(kind="mlp", input_dim=d, widths=widths)


def maxaffine(d: int, cuts: int) -> ArchitectureSpec:
    return ArchitectureSpec(kind="maxaffine", input_dim=d, cuts=cuts)


def partial_groupmax(d: int, k: int, width: int, group_size: int, depth: int) -> ArchitectureSpec:
    return ArchitectureSpec(
        kind="partial_groupmax",
        input_dim=d,
        convex_dim=k,
        feedforward_width=width,
        convex_width=width,
        group_size=group_size,
        depth=depth,
    )


def partial_icnn(d: int, k: int, width: int, depth: int) -> ArchitectureSpec:
    return ArchitectureSpec(
        kind="partial_icnn",
        input_dim=d,
        convex_dim=k,
        feedforward_width=width,
        convex_width=width,
        depth=depth,
    )


def make_case(
    case_id: str,
    function: str,
    sampler: SamplerSpec,
    architecture: ArchitectureSpec,
    iterations: int,
    /,
    noise_std: float = 0.0,
    normalize: bool = False,
    runs: int = 10,
    convex_dim: Optional[int] = None,
    **labels: str,
) -> BenchmarkCase:
    return BenchmarkCase(
        case_id=case_id,
        case=CaseSpec(function=function, sampler=sampler, noise_std=noise_std, convex_dim=convex_dim),
        architecture=architecture,
        training=TrainingBlock(iterations=iterations, normalize=normalize),
        runs=runs,
        labels=labels,
    )


def one_d_networks() -> dict[str, ArchitectureSpec]:
    return {
        "mlp": mlp(1, [10, 10, 10]),
        "icnn": icnn(1, [10, 10, 10]),
        "groupmax": groupmax(1, [10, 10, 10], 5),
    }


def build_t1() -> list[BenchmarkCase]:
    return [
        make_case(f"T1-{name}-{function}", function, gaussian(1, 4.0), arch, 50_000, row=name, column=function)
        for name, arch in one_d_networks().items()
        for function in ONE_D_FUNCTIONS
    ]


def build_t2() -> list[BenchmarkCase]:
    cases = []
    for groups in (2, 4, 6, 12):
        arch = groupmax(1, [12, 12, 12], 12 // groups)
        for function in ONE_D_FUNCTIONS:
            cases.append(
                make_case(f"T2-K{groups}-{function}", function, gaussian(1, 4.0), arch, 50_000, row=str(groups), column=function)
            )
    return cases


def build_t3() -> list[BenchmarkCase]:
    return [
        make_case(f"T3-q{depth}-{function}", function, gaussian(1, 4.0), groupmax(1, [12] * depth, 2), 50_000, row=str(depth), column=function)
        for depth in (2, 3, 4, 5)
        for function in ONE_D_FUNCTIONS
    ]


def partial_networks() -> dict[str, ArchitectureSpec]:
    return {
        "mlp": mlp(2, [10, 10, 10]),
        "partial_icnn": partial_icnn(2, 1, 10, 4),
        "partial_groupmax": partial_groupmax(2, 1, 10, 5, 3),
    }


def _partial_table(table_id: str, sampler: SamplerSpec) -> list[BenchmarkCase]:
    return [
        make_case(f"{table_id}-{name}-{function}", function, sampler, arch, 50_000, row=name, column=function)
        for name, arch in partial_networks().items()
        for function in PARTIAL_FUNCTIONS
    ]


def build_t4() -> list[BenchmarkCase]:
    return _partial_table("T4", gaussian(2))


def build_t5() -> list[BenchmarkCase]:
    return _partial_table("T5", uniform(2))


def build_t6() -> list[BenchmarkCase]:
    cases = []
    for sampler_name, sampler in (("gaussian", gaussian(2)), ("uniform", uniform(2))):
        for depth in (3, 4, 5):
            for function in PARTIAL_FUNCTIONS:
                cases.append(
                    make_case(
                        f"T6-{sampler_name}-q{depth}-{function}",
                        function,
                        sampler,
                        partial_groupmax(2, 1, 12, 3, depth),
                        50_000,
                        row=str(depth),
                        column=f"{function} {sampler_name}",
                    )
                )
    return cases


def _dimension_table(table_id: str, function: str) -> list[BenchmarkCase]:
    cases = []
    for sampler_name, make_sampler in (("gaussian", gaussian), ("uniform", uniform)):
        for d in (2, 3, 4, 5):
            networks = {
                "mlp": mlp(d, [10, 10, 10]),
                "icnn": icnn(d, [10, 10, 10]),
                "groupmax": groupmax(d, [10] * 5, 2),
            }
            for name, arch in networks.items():
                cases.append(
                    make_case(
                        f"{table_id}-{sampler_name}-d{d}-{name}",
                        function,
                        make_sampler(d),
                        arch,
                        100_000,
                        row=name,
                        column=f"d={d} {sampler_name}",
                    )
                )
    return cases


def build_t7() -> list[BenchmarkCase]:
    return _dimension_table("T7", "f8")


def build_t8() -> list[BenchmarkCase]:
    return _dimension_table("T8", "f9")


def build_t9() -> list[BenchmarkCase]:
    return [
        make_case(f"T9-q{depth}-{function}", function, uniform(5), groupmax(5, [10] * depth, 2), 100_000, row=str(depth), column=function)
        for depth in (4, 6, 7, 8)
        for function in ("f8", "f9")
    ]


def build_t10() -> list[BenchmarkCase]:
    from groupmax.bench.targets import F10_CONVEX, F10_FEATURES

    d = F10_FEATURES + F10_CONVEX
    cases = []
    for depth in (3, 5, 7, 9):
        networks = {
            "mlp": mlp(d, [20] * (depth - 1)),
            "partial_icnn": partial_icnn(d, F10_CONVEX, 10, depth),
            "partial_groupmax": partial_groupmax(d, F10_CONVEX, 12, 2, depth),
        }
        for name, arch in networks.items():
            cases.append(
                make_case(f"T10-q{depth}-{name}", "f10", gaussian(d), arch, 50_000, convex_dim=F10_CONVEX, row=str(depth), column=name)
            )
    return cases


def _maxaffine_figure(figure_id: str, normalize: bool) -> list[BenchmarkCase]:
    return [
        make_case(
            f"{figure_id}-N{cuts}-{function}",
            function,
            gaussian(1, 4.0),
            maxaffine(1, cuts),
            20_000,
            noise_std=1.0,
            normalize=normalize,
            runs=1,
            function=function,
            variant=f"maxaffine N={cuts}",
        )
        for function in ONE_D_FUNCTIONS
        for cuts in (4, 8, 16, 32)
    ]


def build_f1() -> list[BenchmarkCase]:
    return _maxaffine_figure("F1", normalize=False)


def build_f2() -> list[BenchmarkCase]:
    return _maxaffine_figure("F2", normalize=True)


def build_f3() -> list[BenchmarkCase]:
    return [
        make_case(f"F3-{name}-{function}", function, gaussian(1, 4.0), arch, 50_000, noise_std=1.0, runs=1, function=function, variant=name)
        for function in ONE_D_FUNCTIONS
        for name, arch in one_d_networks().items()
    ]


def build_f4() -> list[BenchmarkCase]:
    return [case for case in build_f3() if case.architecture.kind == "groupmax"]


GROUP_COUNT_NOTE = (
    "The sweep parameter is read as the number of groups K = M/G with M = 12 neurons "
    "per layer, so K=12 means group size 1. Reading it as the group size instead gives "
    "K=12 a single group of 12; run that variant from a config with group_size set directly."
)

PARTIAL_GROUP_NOTE = (
    "The partial GroupMax layers use group size G = 3 on 12 convex neurons, so each layer "
    "has K = 4 groups. The source text calls this quantity K; only G is configurable and K "
    "is derived from it."
)


class TableRegistry:
    """Registry for benchmark tables and figure dumps"""

    _tables: Dict[str, TableDefinition] = {
        "T1": TableDefinition("T1", "MSE for the different networks", build_t1),
        "T2": TableDefinition("T2", "Influence of the group count on the MSE", build_t2, row_header="K", notes=GROUP_COUNT_NOTE),
        "T3": TableDefinition("T3", "Influence of the number of layers on the MSE", build_t3, row_header="q"),
        "T4": TableDefinition("T4", "Partially convex targets, X ~ N(0,1)^2", build_t4),
        "T5": TableDefinition("T5", "Partially convex targets, X ~ U([-2,2]^2)", build_t5),
        "T6": TableDefinition("T6", "Partial GroupMax depth sweep", build_t6, row_header="q", notes=PARTIAL_GROUP_NOTE),
        "T7": TableDefinition("T7", "f8 by input dimension", build_t7),
        "T8": TableDefinition("T8", "f9 by input dimension", build_t8),
        "T9": TableDefinition("T9", "GroupMax depth sweep in dimension 5", build_t9, row_header="q"),
        "T10": TableDefinition("T10", "f10 by number of layers", build_t10, row_header="q"),
        "F1": TableDefinition("F1", "Max-affine fits of noisy data", build_f1, kind="figure"),
        "F2": TableDefinition("F2", "Max-affine fits with normalization", build_f2, kind="figure"),
        "F3": TableDefinition("F3", "GroupMax, ICNN and MLP fits of noisy data", build_f3, kind="figure"),
        "F4": TableDefinition("F4", "Cuts of the GroupMax fits", build_f4, kind="figure", with_cuts=True),
    }

    @classmethod
    def get_table(cls, table_id: str) -> TableDefinition:
        """Look up a table or figure by id"""
        table = cls._tables.get(table_id)
        if table is None:
            raise UnknownIdentifierError("table", table_id, cls.list_registered_ids())
        return table

    @classmethod
    def register_table(cls, table: TableDefinition):
        """Register a custom table definition"""
        cls._tables[table.table_id] = table
        logger.info(f"Registered benchmark table: {table.table_id}")

    @classmethod
    def list_registered_ids(cls) -> list:
        """List all registered table ids"""
        return list(cls._tables.keys())

    @classmethod
    def is_registered(cls, table_id: str) -> bool:
        """Check if table id is registered"""
        return table_id in cls._tables
