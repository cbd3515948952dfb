"""
Cut files.

    cuts v1 dim=<d> n=<N> [conditional x̃=<comma separated reals>]
    <intercept> <slope_1> ... <slope_d>
    ...

Reals are written with ``repr``, the shortest string that parses back to the
same double, so export followed by import is the identity bit for bit.
"""

from pathlib import Path

import numpy as np

from groupmax.utils.errors import CutFileParseError
from groupmax.utils.files import atomic_write_text
from groupmax.utils.logging import get_logger

from .types import CutSet

logger = get_logger()

MAGIC = "cuts"
VERSION = "v1"
CONDITIONAL_KEY = "x̃="


def _real(value: float) -> str:
    return repr(float(value))


def format_cutset(c: CutSet) -> str:
    header = f"{MAGIC} {VERSION} dim={c.dimension} n={len(c)}"
    if c.is_conditional:
        header += f" conditional {CONDITIONAL_KEY}{','.join(_real(v) for v in c.x_tilde)}"
    lines = [header]
    for slope, intercept in zip(c.slopes, c.intercepts):
        lines.append(" ".join([_real(intercept), *(_real(v) for v in slope)]))
    return "\n".join(lines) + "\n"


def export_cuts(c: CutSet, path: str | Path) -> Path:
    target = atomic_write_text(path, format_cutset(c))
    logger.info(f"Wrote {len(c)} cuts to {target}")
    return target


def _parse_float(token: str, line_number: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CutFileParseError(f"'{token}' is not a real number", line_number) from None
    if not np.isfinite(value):
        raise CutFileParseError(f"'{token}' is not finite", line_number)
    return value


def _parse_count(token: str, key: str, line_number: int) -> int:
    if not token.startswith(f"{key}="):
        raise CutFileParseError(f"expected '{key}=<count>' in the header, got '{token}'", line_number)
    raw = token[len(key) + 1 :]
    if not raw.isdigit() or int(raw) < 1:
        raise CutFileParseError(f"'{key}' must be a positive integer, got '{raw}'", line_number)
    return int(raw)


def parse_cutset(text: str) -> CutSet:
    lines = text.split("\n")
    # a single trailing newline ends the last cut line
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].strip():
        raise CutFileParseError("empty cut file", 1)

    header = lines[0].split()
    if len(header) < 4 or header[0] != MAGIC or header[1] != VERSION:
        raise CutFileParseError(f"header must start with '{MAGIC} {VERSION} dim=<d> n=<N>'", 1)
    dim = _parse_count(header[2], "dim", 1)
    count = _parse_count(header[3], "n", 1)

    x_tilde = None
    if len(header) > 4:
        if len(header) != 6 or header[4] != "conditional" or not header[5].startswith(CONDITIONAL_KEY):
            raise CutFileParseError(f"unexpected header suffix '{' '.join(header[4:])}'", 1)
        values = header[5][len(CONDITIONAL_KEY) :].split(",")
        x_tilde = [_parse_float(token, 1) for token in values]

    body = lines[1:]
    if len(body) != count:
        # the first missing line, or the first surplus one
        line_number = len(lines) + 1 if len(body) < count else count + 2
        raise CutFileParseError(f"header announces {count} cuts, file holds {len(body)}", line_number)

    slopes = np.empty((count, dim))
    intercepts = np.empty(count)
    for offset, line in enumerate(body):
        line_number = offset + 2
        tokens = line.split()
        if len(tokens) != dim + 1:
            raise CutFileParseError(
                f"expected {dim + 1} reals (intercept and {dim} slopes), got {len(tokens)}", line_number
            )
        intercepts[offset] = _parse_float(tokens[0], line_number)
        slopes[offset] = [_parse_float(token, line_number) for token in tokens[1:]]

    return CutSet(slopes, intercepts, x_tilde=x_tilde)


def import_cuts(path: str | Path) -> CutSet:
    return parse_cutset(Path(path).read_text(encoding="utf-8"))
