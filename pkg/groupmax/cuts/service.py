"""Cut extraction for trained models, in the coordinates the model was queried in."""

from typing import Optional

import numpy as np

from groupmax.networks import PartialNetworkParams
from groupmax.training import FittedModel
from groupmax.utils.errors import StructuralError

from .active import active_cut
from .enumeration import enumerate_conditional_cuts, enumerate_cuts
from .transform import denormalize_cut, denormalize_cutset
from .types import Cut, CutSet


def _feature_slice(model: FittedModel) -> slice:
    return slice(0, model.params.input_dim - model.params.convex_dim)


def fitted_active_cut(model: FittedModel, point, x_tilde=None) -> Cut:
    params, norm = model.params, model.normalizer
    point = np.atleast_1d(np.asarray(point, dtype=np.float64))
    if norm is None:
        return active_cut(params, point, x_tilde)

    if isinstance(params, PartialNetworkParams):
        if x_tilde is None:
            raise StructuralError("partially convex networks need x_tilde for an active cut")
        x_tilde = norm.restrict(_feature_slice(model)).normalize_inputs(np.atleast_1d(x_tilde))
    point = norm.restrict(params.convex_slice).normalize_inputs(point)
    return denormalize_cut(active_cut(params, point, x_tilde), norm.restrict(params.convex_slice))


def fitted_enumerate_cuts(model: FittedModel, cap: Optional[int] = None) -> CutSet:
    if isinstance(model.params, PartialNetworkParams):
        raise StructuralError("partially convex networks only have conditional cut sets; pass x_tilde")
    if not hasattr(model.params, "convex_layers"):
        raise StructuralError(f"{model.params.kind} networks have no finite cut representation")
    cuts = enumerate_cuts(model.params, cap=cap)
    return cuts if model.normalizer is None else denormalize_cutset(cuts, model.normalizer)


def fitted_conditional_cuts(model: FittedModel, x_tilde, cap: Optional[int] = None) -> CutSet:
    params, norm = model.params, model.normalizer
    if not isinstance(params, PartialNetworkParams):
        raise StructuralError(f"{params.kind} networks are fully convex; use full enumeration")
    x_tilde = np.atleast_1d(np.asarray(x_tilde, dtype=np.float64))
    if norm is None:
        return enumerate_conditional_cuts(params, x_tilde, cap=cap)

    condition = norm.restrict(_feature_slice(model)).normalize_inputs(x_tilde)
    cuts = denormalize_cutset(enumerate_conditional_cuts(params, condition, cap=cap), norm.restrict(params.convex_slice))
    return CutSet(
        cuts.slopes,
        cuts.intercepts,
        model_hash=cuts.model_hash,
        x_tilde=x_tilde,
        enumerated_count=cuts.enumerated_count,
    )
