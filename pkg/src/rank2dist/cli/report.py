"""Report documents: nested dicts of strings, ints, bools and tagged floats.

Structured output is JSON with sorted keys; floats carry 15 significant
digits.  Text output is an indented key/value listing of the same document.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from ..symbalg.expr import format_rational


def num(value: float) -> float:
    """Round to 15 significant digits."""
    return float(f"{value:.15g}")


def exact(value: Fraction | int) -> str:
    return format_rational(value)


def point_doc(point) -> dict[str, str]:
    return {k: format_rational(v) for k, v in point.items()}


def to_structured(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_text(report: dict[str, Any]) -> str:
    lines: list[str] = []
    _emit(report, 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    return str(v)


def _emit(doc: Any, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _emit(value, depth + 1, lines)
        elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
            lines.append(f"{pad}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines.append(f"{pad}  -")
                    _emit(item, depth + 2, lines)
                else:
                    lines.append(f"{pad}  - {_scalar(item)}")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
