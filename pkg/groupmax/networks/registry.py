from typing import Callable, Dict, Optional, Type

from groupmax.schemas.network_schemas import ArchitectureSpec
from groupmax.utils.errors import UnknownIdentifierError
from groupmax.utils.logging import get_logger

from .base import NetworkParams
from .baselines import ICNNParams, MLPParams, build_icnn, build_mlp
from .groupmax import GroupMaxParams, build_groupmax
from .maxaffine import MaxAffineParams, build_maxaffine
from .partial import PartialGroupMaxParams, PartialICNNParams, build_partial, build_partial_icnn

logger = get_logger()

NetworkFactory = Callable[[ArchitectureSpec], NetworkParams]


def create_groupmax(spec: ArchitectureSpec) -> GroupMaxParams:
    return build_groupmax(spec.input_dim, spec.widths, spec.group_size, spec.seed)


def create_partial_groupmax(spec: ArchitectureSpec) -> PartialGroupMaxParams:
    return build_partial(
        spec.input_dim,
        spec.convex_dim,
        spec.feedforward_width,
        spec.convex_width,
        spec.group_size,
        spec.depth,
        spec.seed,
        spec.activation,
    )


def create_partial_icnn(spec: ArchitectureSpec) -> PartialICNNParams:
    return build_partial_icnn(
        spec.input_dim,
        spec.convex_dim,
        spec.feedforward_width,
        spec.convex_width,
        spec.depth,
        spec.seed,
        spec.activation,
    )


def create_maxaffine(spec: ArchitectureSpec) -> MaxAffineParams:
    return build_maxaffine(spec.input_dim, spec.cuts, spec.seed)


def create_icnn(spec: ArchitectureSpec) -> ICNNParams:
    return build_icnn(spec.input_dim, spec.widths, spec.seed)


def create_mlp(spec: ArchitectureSpec) -> MLPParams:
    return build_mlp(spec.input_dim, spec.widths, spec.seed, spec.activation)


class NetworkRegistry:
    """Registry for network construction and model-file loading"""

    # Map architecture kinds to factory functions
    _factories: Dict[str, NetworkFactory] = {
        "groupmax": create_groupmax,
        "partial_groupmax": create_partial_groupmax,
        "maxaffine": create_maxaffine,
        "icnn": create_icnn,
        "partial_icnn": create_partial_icnn,
        "mlp": create_mlp,
    }

    # Map architecture kinds to parameter classes
    _param_classes: Dict[str, Type[NetworkParams]] = {
        "groupmax": GroupMaxParams,
        "partial_groupmax": PartialGroupMaxParams,
        "maxaffine": MaxAffineParams,
        "icnn": ICNNParams,
        "partial_icnn": PartialICNNParams,
        "mlp": MLPParams,
    }

    @classmethod
    def create_network(cls, spec: ArchitectureSpec) -> NetworkParams:
        """Build a freshly initialized network for an architecture block"""
        factory = cls._factories.get(spec.kind)
        if factory is None:
            raise UnknownIdentifierError("architecture", spec.kind, cls.list_registered_kinds())
        params = factory(spec)
        logger.info(f"Built {spec.kind} network with {params.parameter_count()} parameters (seed {spec.seed})")
        return params

    @classmethod
    def params_class(cls, kind: str) -> Type[NetworkParams]:
        params_class: Optional[Type[NetworkParams]] = cls._param_classes.get(kind)
        if params_class is None:
            raise UnknownIdentifierError("architecture", kind, cls.list_registered_kinds())
        return params_class

    @classmethod
    def list_registered_kinds(cls) -> list:
        """List all registered architecture kinds"""
        return list(cls._factories.keys())

    @classmethod
    def is_registered(cls, kind: str) -> bool:
        """Check if architecture kind is registered"""
        return kind in cls._factories


def get_network(spec: ArchitectureSpec) -> NetworkParams:
    return NetworkRegistry.create_network(spec)
