"""JSON output with fixed float precision, and the operator file format.

Floats are written with 17 significant digits so that every value round-trips
exactly; non-finite values become ``null``. Operator files look like::

    {"dims": [d_S, d_E], "entries": [[[re, im], ...], ...]}

with row-major entries. A one-dimensional ``entries`` list is read as a ket.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .linop import BipartiteSpace

__all__ = ["to_jsonable", "dumps", "load_operator", "save_operator", "operator_to_json"]


def to_jsonable(obj):
    """Convert records, numpy values and containers to plain JSON types."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    # keep floats recognisable as floats
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, indent, level, out):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ","
    colon = ": " if indent is not None else ":"
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(sep)
            out.append(pad + json.dumps(k) + colon)
            _emit(v, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(sep)
            out.append(pad)
            _emit(v, indent, level + 1, out)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """Serialise ``obj`` with 17-significant-digit floats."""
    out: list[str] = []
    _emit(to_jsonable(obj), indent, 0, out)
    return "".join(out)


def operator_to_json(M, space: BipartiteSpace) -> dict:
    A = np.asarray(M, dtype=np.complex128)
    pairs = np.stack([A.real, A.imag], axis=-1)
    return {"dims": [space.d_S, space.d_E], "entries": pairs.tolist()}


def save_operator(path, M, space: BipartiteSpace) -> None:
    Path(path).write_text(dumps(operator_to_json(M, space), indent=None) + "\n")


def load_operator(path) -> tuple[np.ndarray, BipartiteSpace]:
    """Read an operator (or ket) file; returns the array and its space."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read operator file {path}: {exc}") from exc
    try:
        d_S, d_E = (int(d) for d in data["dims"])
        arr = np.asarray(data["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed operator file {path}: {exc}") from exc
    space = BipartiteSpace(d_S, d_E)
    n = space.dim
    if arr.shape not in ((n, 2), (n, n, 2)):
        raise ConfigError(f"operator file {path} has entries of shape {arr.shape[:-1]}, "
                          f"expected ({n},) or ({n}, {n})")
    return arr[..., 0] + 1j * arr[..., 1], space
