from .active import active_cut, trace_active_piece
from .enumeration import (
    cut_count_report,
    deduplicate_cuts,
    enumerate_conditional_cuts,
    enumerate_cuts,
    formula_cut_count,
    predicted_cut_count,
)
from .io import export_cuts, format_cutset, import_cuts, parse_cutset
from .service import fitted_active_cut, fitted_conditional_cuts, fitted_enumerate_cuts
from .transform import denormalize_cut, denormalize_cutset
from .types import Cut, CutSet, eval_cutset

__all__ = [
    "Cut",
    "CutSet",
    "eval_cutset",
    "enumerate_cuts",
    "enumerate_conditional_cuts",
    "predicted_cut_count",
    "formula_cut_count",
    "cut_count_report",
    "deduplicate_cuts",
    "active_cut",
    "trace_active_piece",
    "export_cuts",
    "import_cuts",
    "format_cutset",
    "parse_cutset",
    "denormalize_cut",
    "denormalize_cutset",
    "fitted_active_cut",
    "fitted_enumerate_cuts",
    "fitted_conditional_cuts",
]
