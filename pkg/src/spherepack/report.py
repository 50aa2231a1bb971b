"""Deterministic JSON rendering for reports.

Floats are written with 17 significant digits so every double round
trips exactly; dict insertion order is preserved.  Rendering the same
object twice yields byte-identical text, which the determinism
guarantees of the CLI rely on.
"""

import hashlib
import json
import math
from enum import Enum

import numpy as np


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _render(obj, out: list):
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, Enum):
        _render(obj.value, out)
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number in report: {x!r}")
        out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"report keys must be strings, got {key!r}")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _render(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, value in enumerate(seq):
            if i:
                out.append(", ")
            _render(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot render {type(obj).__name__} in report")


def render_json(obj) -> str:
    """Serialize a report object to deterministic JSON text."""
    out: list = []
    _render(obj, out)
    return "".join(out)
