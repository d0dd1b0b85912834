"""Deterministic JSON reports (schema ``report_v1``).

Keys are sorted and every float is written with 17 significant digits, so
equal inputs give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import os
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__
from .config import TOL, Tolerances
from .norm2d import DualOf, Lp, ParamAB
from .polygon import Polygon2
from .seqspace import Leaf, SparseVec, Sum

SCHEMA = "report_v1"


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    # keep integral floats recognizable as floats when read back
    return s if any(ch in s for ch in ".en") else s + ".0"


def to_plain(obj):
    """Reduce library objects to JSON-compatible values."""
    from .specs import format_norm, format_space, vector_to_json

    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (Lp, ParamAB, Polygon2, DualOf)):
        return format_norm(obj)
    if isinstance(obj, (Leaf, Sum)):
        return format_space(obj)
    if isinstance(obj, SparseVec):
        return vector_to_json(obj)
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if dataclasses.is_dataclass(obj):
        out = {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for name in ("passed", "width", "difference", "interior_mismatches", "worst_violation"):
            if hasattr(type(obj), name) and isinstance(getattr(type(obj), name), property):
                out[name] = to_plain(getattr(obj, name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, indent: int, level: int, out: list):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + json.dumps(k) + ": ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"not a plain value: {obj!r}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(to_plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def make_report(command: str, inputs: dict, results, seed: int,
                tolerances: Tolerances = TOL, timing_ms: float | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "results": results,
        "provenance": {
            "tool": "octanorm",
            "version": __version__,
            "seed": seed,
            "tolerances": tolerances.as_dict(),
        },
        "timing_ms": timing_ms,
    }


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file so a failed run never leaves partial output."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".octanorm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
