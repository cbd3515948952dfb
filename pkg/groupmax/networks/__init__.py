from .base import NetworkParams
from .baselines import ICNNParams, MLPParams, build_icnn, build_mlp, forward_icnn, forward_mlp
from .groupmax import GroupMaxParams, build_groupmax, embed_maxaffine, forward_groupmax
from .layers import ConvexLayer
from .maxaffine import MaxAffineParams, build_maxaffine, forward_maxaffine
from .partial import (
    PartialGroupMaxParams,
    PartialICNNParams,
    PartialNetworkParams,
    build_partial,
    build_partial_icnn,
    forward_partial,
)
from .registry import NetworkRegistry, get_network
from .serialization import ModelFile, load_model, model_hash, parse_model, save_model

__all__ = [
    "NetworkParams",
    "ConvexLayer",
    "GroupMaxParams",
    "build_groupmax",
    "forward_groupmax",
    "embed_maxaffine",
    "PartialNetworkParams",
    "PartialGroupMaxParams",
    "PartialICNNParams",
    "build_partial",
    "build_partial_icnn",
    "forward_partial",
    "MaxAffineParams",
    "build_maxaffine",
    "forward_maxaffine",
    "ICNNParams",
    "MLPParams",
    "build_icnn",
    "build_mlp",
    "forward_icnn",
    "forward_mlp",
    "NetworkRegistry",
    "get_network",
    "ModelFile",
    "save_model",
    "load_model",
    "parse_model",
    "model_hash",
]
