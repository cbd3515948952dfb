"""
Exact cut enumeration by distributing every max over the positive sums feeding it.

A group output of layer i is the max over its G neurons, and each neuron of
layer i + 1 is a nonnegative combination of group outputs plus an affine term.
Since a nonnegative combination of maxima is the max over all combinations,
a neuron's cut set is the Minkowski sum of its input groups' cut sets, scaled
by the clamped weights. Cuts are carried as rows ``[slope..., intercept]``.
No deduplication happens between layers, so the enumerated size is exactly
``predicted_cut_count``.
"""

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from groupmax.config.settings import settings
from groupmax.networks import GroupMaxParams, MaxAffineParams, PartialNetworkParams, build_groupmax, model_hash
from groupmax.networks.layers import ConvexLayer
from groupmax.utils.errors import CutOverflowError, StructuralError
from groupmax.utils.logging import get_logger

from .types import CutSet

logger = get_logger()


def formula_cut_count(width: int, group_size: int, groups: int, depth: int) -> int:
    """The closed-form count M * G^(K(q-1))."""
    return int(width) * int(group_size) ** (int(groups) * (int(depth) - 1))


def _layered_count(layers: Sequence[ConvexLayer]) -> int:
    group_cut_counts: Optional[list[int]] = None
    for layer in layers:
        per_neuron = 1 if layer.mix is None else int(np.prod([int(c) for c in group_cut_counts], dtype=object))
        if layer.group_size is None:
            return layer.width * per_neuron
        group_cut_counts = [layer.group_size * per_neuron] * (layer.width // layer.group_size)
    raise StructuralError("layer stack does not end with a global max")


def predicted_cut_count(p: GroupMaxParams | MaxAffineParams) -> int:
    """Number of cuts the enumeration produces before deduplication."""
    return _layered_count(p.convex_layers())


def _formula_count_for(p) -> Optional[int]:
    if isinstance(p, GroupMaxParams) and p.depth > 1:
        return formula_cut_count(p.widths[-1], p.group_size, p.widths[0] // p.group_size, p.depth)
    return None


def _distribute(layers: Sequence[ConvexLayer]) -> np.ndarray:
    dim = layers[0].slopes.shape[1]
    group_cuts: Optional[list[np.ndarray]] = None
    for layer in layers:
        neuron_cuts = []
        for n in range(layer.width):
            acc = np.append(layer.slopes[n], layer.intercepts[n])[None, :]
            if layer.mix is not None:
                for g, cuts in enumerate(group_cuts):
                    acc = (acc[:, None, :] + layer.mix[n, g] * cuts[None, :, :]).reshape(-1, dim + 1)
            neuron_cuts.append(acc)
        if layer.group_size is None:
            return np.concatenate(neuron_cuts)
        G = layer.group_size
        group_cuts = [np.concatenate(neuron_cuts[g * G : (g + 1) * G]) for g in range(layer.width // G)]
    raise StructuralError("layer stack does not end with a global max")


def deduplicate_cuts(rows: np.ndarray, tolerance: Optional[float] = None) -> np.ndarray:
    """
    Drop rows within ``tolerance`` componentwise of an earlier kept row.

    Survivors keep their original order.
    """
    tolerance = settings.CUT_DEDUP_TOLERANCE if tolerance is None else tolerance
    if rows.shape[0] < 2:
        return rows
    # exact repeats come from zero clamped weights; later copies never decide anything
    _, first_seen = np.unique(rows, axis=0, return_index=True)
    rows = rows[np.sort(first_seen)]
    count = rows.shape[0]

    # near-duplicates agree on the first column, so only rows sharing a window there are compared
    order = np.argsort(rows[:, 0], kind="stable")
    rank = np.empty(count, dtype=int)
    rank[order] = np.arange(count)
    first = rows[order, 0]
    lower = np.searchsorted(first, first - tolerance, side="left")
    upper = np.searchsorted(first, first + tolerance, side="right")

    keep = np.ones(count, dtype=bool)
    for index in np.sort(order[upper - lower > 1]):
        position = rank[index]
        window = order[lower[position] : upper[position]]
        earlier = window[(window < index) & keep[window]]
        if earlier.size and np.any(np.all(np.abs(rows[earlier] - rows[index]) <= tolerance, axis=1)):
            keep[index] = False
    return rows[keep]


def _enumerate_layers(
    layers: Sequence[ConvexLayer],
    cap: int,
    formula_count: Optional[int],
    dedup: bool,
) -> tuple[np.ndarray, int]:
    predicted = _layered_count(layers)
    if predicted > cap:
        raise CutOverflowError(predicted, cap, formula_count)
    rows = _distribute(layers)
    enumerated = rows.shape[0]
    if dedup:
        rows = deduplicate_cuts(rows)
    logger.info(f"Enumerated {enumerated} cuts, {rows.shape[0]} after deduplication")
    return rows, enumerated


def enumerate_cuts(
    p: GroupMaxParams | MaxAffineParams,
    cap: Optional[int] = None,
    dedup: bool = True,
) -> CutSet:
    """All cuts of a fully convex max-affine network; max over them equals the forward pass."""
    cap = settings.CUT_ENUMERATION_CAP if cap is None else cap
    rows, enumerated = _enumerate_layers(p.convex_layers(), cap, _formula_count_for(p), dedup)
    return CutSet(rows[:, :-1], rows[:, -1], model_hash=model_hash(p), enumerated_count=enumerated)


def enumerate_conditional_cuts(
    p: PartialNetworkParams,
    x_tilde,
    cap: Optional[int] = None,
    dedup: bool = True,
) -> CutSet:
    """Cuts in y of a partially convex network with x_tilde frozen."""
    cap = settings.CUT_ENUMERATION_CAP if cap is None else cap
    layers = p.conditional_layers(x_tilde)
    rows, enumerated = _enumerate_layers(layers, cap, None, dedup)
    return CutSet(
        rows[:, :-1],
        rows[:, -1],
        model_hash=model_hash(p),
        x_tilde=np.atleast_1d(np.asarray(x_tilde, dtype=np.float64)),
        enumerated_count=enumerated,
    )


def cut_count_report(
    width: int,
    group_size: int,
    depths: Sequence[int] = (1, 2, 3),
    d: int = 1,
    seed: int = 0,
    cap: Optional[int] = None,
) -> pd.DataFrame:
    """
    Enumerated (pre-dedup) cut counts against M * G^(K(q-1)) on constant-width nets.

    Depths whose enumeration would exceed the cap report the predicted count only.
    """
    cap = settings.CUT_ENUMERATION_CAP if cap is None else cap
    groups = width // group_size
    rows = []
    for depth in depths:
        p = build_groupmax(d, [width] * depth, group_size, seed)
        predicted = predicted_cut_count(p)
        formula = formula_cut_count(width, group_size, groups, depth) if depth > 1 else width
        enumerated = enumerate_cuts(p, cap=cap).enumerated_count if predicted <= cap else None
        rows.append(
            {
                "q": depth,
                "M": width,
                "G": group_size,
                "K": groups,
                "formula_count": formula,
                "predicted_count": predicted,
                "enumerated_count": enumerated,
                "matches_formula": enumerated == formula if enumerated is not None else None,
            }
        )
        if enumerated is not None and enumerated != formula:
            logger.warning(f"q={depth}: enumeration gives {enumerated} cuts, M*G^(K(q-1)) gives {formula}")
    return pd.DataFrame(rows)
