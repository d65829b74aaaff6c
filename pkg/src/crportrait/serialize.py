"""Deterministic JSON: fixed key order, reals with 17 significant digits."""

from __future__ import annotations

import json
import math
from enum import Enum

import numpy as np

SCHEMA = 1


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0:
        return "0.0"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _write(obj, out, 0, indent)
    return "".join(out) + "\n"


def _write(obj, out: list[str], level: int, indent: int) -> None:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, Enum):
        obj = obj.value
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_num(obj))
    elif isinstance(obj, (complex, np.complexfloating)):
        out.append(f"[{_num(obj.real)}, {_num(obj.imag)}]")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
            _write(v, out, level + 1, indent)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        flat = all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in items)
        if flat:
            # short numeric rows stay on one line
            out.append("[" + ", ".join(str(int(v)) if isinstance(v, (int, np.integer)) else _num(v) for v in items) + "]")
            return
        out.append("[")
        for i, v in enumerate(items):
            out.append(("," if i else "") + pad)
            _write(v, out, level + 1, indent)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
