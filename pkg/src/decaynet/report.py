"""Report rows and deterministic JSON/CSV emission."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

# slack for floating-point rounding when an inequality is tight (e.g. identity)
RTOL = 1e-12
ATOL = 1e-300


def leq(lhs: float, rhs: float, rtol: float = RTOL) -> bool:
    return bool(lhs <= rhs + rtol * abs(rhs) + ATOL)


@dataclass
class Check:
    """One verified inequality: ``exact`` against each entry of ``bounds``."""

    op: str
    anchor: str
    inputs: dict
    exact: float
    bounds: list
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        row = {
            "op": self.op,
            "anchor": self.anchor,
            "inputs": self.inputs,
            "exact": self.exact,
            "bounds": self.bounds,
            "pass": self.passed,
        }
        row.update(self.extra)
        return row


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (json.dumps(k) + ": " + _encode(v, indent, level + 1) for k, v in obj.items())
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    return json.dumps(obj)


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits."""
    return _encode(_plain(obj), indent, 0) + "\n"


def norm_row(op: str, params: dict, value: float) -> dict:
    return {"op": op, "params": params, "value": value}


def write_csv(rows: Sequence[dict], columns: Iterable[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
