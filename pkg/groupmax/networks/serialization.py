"""
Versioned model files.

A model file is an indented JSON document with sorted keys:

    {"format": "groupmax-model", "version": 1, "kind": ..., "structure": {...},
     "weights": {name: {"shape": [...], "data": [...]}}, "normalizer": {...} | null,
     "case": {...} | null}

orjson writes floats in their shortest round-trip form, so a loaded model
evaluates bit-identically to the one that was saved.
"""

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np
import orjson
from pydantic import ValidationError

from groupmax.utils.errors import GroupMaxError, ModelFileError
from groupmax.utils.files import atomic_write_bytes
from groupmax.utils.logging import get_logger

from .base import NetworkParams
from .registry import NetworkRegistry

logger = get_logger()

MODEL_FORMAT = "groupmax-model"
MODEL_VERSION = 1

DUMP_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE


@dataclass(frozen=True)
class ModelFile:
    params: NetworkParams
    normalizer: Optional[dict[str, Any]] = None
    case: Optional[dict[str, Any]] = None


def _weights_document(params: NetworkParams) -> dict[str, Any]:
    return {
        name: {"shape": list(array.shape), "data": array.ravel().tolist()}
        for name, array in params.weights.items()
    }


def model_hash(params: NetworkParams) -> str:
    """sha256 of the canonical serialization of kind, structure and weights."""
    canonical = orjson.dumps(
        {"kind": params.kind, "structure": params.structure(), "weights": _weights_document(params)},
        option=orjson.OPT_SORT_KEYS,
    )
    return hashlib.sha256(canonical).hexdigest()


def dump_model(
    params: NetworkParams,
    normalizer: Optional[dict[str, Any]] = None,
    case: Optional[dict[str, Any]] = None,
) -> bytes:
    document = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "kind": params.kind,
        "structure": params.structure(),
        "weights": _weights_document(params),
        "normalizer": normalizer,
        "case": case,
    }
    return orjson.dumps(document, option=DUMP_OPTIONS)


def save_model(
    path: str | Path,
    params: NetworkParams,
    normalizer: Optional[dict[str, Any]] = None,
    case: Optional[dict[str, Any]] = None,
) -> Path:
    target = atomic_write_bytes(path, dump_model(params, normalizer, case))
    logger.info(f"Saved {params.kind} model to {target}")
    return target


def parse_model(raw: bytes, source: str = "<bytes>") -> ModelFile:
    try:
        document = orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise ModelFileError(f"{source} is not valid JSON: {exc}") from exc

    if not isinstance(document, dict) or document.get("format") != MODEL_FORMAT:
        raise ModelFileError(f"{source} is not a {MODEL_FORMAT} file")
    if document.get("version") != MODEL_VERSION:
        raise ModelFileError(f"{source} has unsupported version {document.get('version')!r}")

    try:
        params_class = NetworkRegistry.params_class(document["kind"])
        weights = {
            name: np.asarray(entry["data"], dtype=np.float64).reshape(entry["shape"])
            for name, entry in document["weights"].items()
        }
        params = params_class.model_validate({**document["structure"], "weights": weights})
    except (KeyError, TypeError, ValueError, ValidationError, GroupMaxError) as exc:
        raise ModelFileError(f"{source} has an inconsistent model: {exc}") from exc

    return ModelFile(params=params, normalizer=document.get("normalizer"), case=document.get("case"))


def load_model(path: str | Path) -> ModelFile:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model file {path} does not exist")
    return parse_model(path.read_bytes(), source=str(path))
