"""Manifest documents (TOML) describing a distribution and run options.

Either a catalog reference::

    example = "D2"

or inline data::

    name = "D0(5)"
    coordinates = ["x1", "x2", "x3", "x4", "x5"]
    X1 = ["1", "0", "0", "0", "0"]
    X2 = ["0", "1", "x1", "x1^2/2", "x1*x2"]
    base_point = { x1 = "0", x2 = "0", x3 = "0", x4 = "0", x5 = "0" }

    [[aux]]                       # optional auxiliary symbols
    name = "sb"
    derivatives = { beta = "cb" }
    rewrite = ["sb^2", "1 - cb^2"]
    sample = ["beta", "2*t/(1 + t^2)"]

    [options]                     # optional
    order = 10
    eps1 = "inv_u5"
    seed = 0
    points = ["u4=1,u5=0"]

``completion`` (a list of coefficient lists) optionally fixes X6..Xn.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .. import catalog
from ..errors import DimensionMismatch, InvalidStyle, ParseError, UnknownSymbol
from ..invariants import STYLES
from ..manifold import DistributionSpec, VField
from ..symbalg.expr import AuxDecl, Chart, format_rational

CLI_STYLES = tuple(s for s in STYLES if s != "custom")
_OPTION_KEYS = {"order", "eps1", "seed", "points"}
_TOP_KEYS = {"example", "name", "coordinates", "X1", "X2", "completion", "base_point", "aux", "options"}


@dataclass
class Options:
    order: int | None = None
    eps1: str | None = None
    seed: int | None = None
    points: list[str] = field(default_factory=list)


@dataclass
class Manifest:
    spec: DistributionSpec
    options: Options
    example: str | None = None
    coordinates: tuple[str, ...] = ()
    x1: tuple[str, ...] = ()
    x2: tuple[str, ...] = ()
    completion: tuple[tuple[str, ...], ...] = ()
    base_point: dict[str, Fraction] = field(default_factory=dict)
    aux: tuple[AuxDecl, ...] = ()

    @property
    def n(self) -> int:
        return self.spec.chart.n


def parse_manifest(text: str) -> Manifest:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = _toml_position(str(exc))
        raise ParseError(f"malformed manifest: {exc}", line, col) from None
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown manifest keys: {', '.join(sorted(unknown))}", 1)
    options = _parse_options(doc.get("options", {}))
    if "example" in doc:
        extra = set(doc) - {"example", "options"}
        if extra:
            raise ParseError(f"'example' cannot be combined with {', '.join(sorted(extra))}", 1)
        name = _string(doc["example"], "example")
        return Manifest(catalog.get(name), options, example=name)
    return _inline(doc, options)


def _toml_position(message: str) -> tuple[int, int]:
    m = re.search(r"line (\d+), column (\d+)", message)
    return (int(m.group(1)), int(m.group(2))) if m else (1, 1)


def _string(v: Any, what: str) -> str:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ParseError(f"{what} must be a string", 1)
    return str(v)


def _strings(v: Any, what: str) -> tuple[str, ...]:
    if not isinstance(v, list):
        raise ParseError(f"{what} must be a list of strings", 1)
    return tuple(_string(x, what) for x in v)


def _parse_options(raw: Mapping[str, Any]) -> Options:
    if not isinstance(raw, Mapping):
        raise ParseError("[options] must be a table", 1)
    unknown = set(raw) - _OPTION_KEYS
    if unknown:
        raise ParseError(f"unknown options: {', '.join(sorted(unknown))}", 1)
    opts = Options()
    if "order" in raw:
        if not isinstance(raw["order"], int) or raw["order"] < 1:
            raise ParseError("options.order must be a positive integer", 1)
        opts.order = raw["order"]
    if "eps1" in raw:
        style = _string(raw["eps1"], "options.eps1")
        if style not in CLI_STYLES:
            raise InvalidStyle(f"unknown eps1 style {style!r}; choose from {', '.join(CLI_STYLES)}")
        opts.eps1 = style
    if "seed" in raw:
        if not isinstance(raw["seed"], int):
            raise ParseError("options.seed must be an integer", 1)
        opts.seed = raw["seed"]
    if "points" in raw:
        opts.points = list(_strings(raw["points"], "options.points"))
    return opts


def _parse_aux(raw: Any) -> tuple[AuxDecl, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise ParseError("aux must be an array of tables", 1)
    out = []
    for entry in raw:
        if not isinstance(entry, Mapping) or "name" not in entry:
            raise ParseError("each aux entry needs a name", 1)
        derivs = entry.get("derivatives", {})
        if not isinstance(derivs, Mapping):
            raise ParseError("aux derivatives must be a table", 1)
        rewrite = entry.get("rewrite")
        sample = entry.get("sample")
        out.append(
            AuxDecl(
                _string(entry["name"], "aux.name"),
                {str(k): _string(v, "aux derivative") for k, v in derivs.items()},
                tuple(_strings(rewrite, "aux.rewrite")) if rewrite is not None else None,
                tuple(_strings(sample, "aux.sample")) if sample is not None else None,
            )
        )
    return tuple(out)


def _inline(doc: Mapping[str, Any], options: Options) -> Manifest:
    for key in ("coordinates", "X1", "X2"):
        if key not in doc:
            raise ParseError(f"inline manifest needs '{key}'", 1)
    coords = _strings(doc["coordinates"], "coordinates")
    if len(set(coords)) != len(coords):
        raise ParseError("duplicate coordinate names", 1)
    aux = _parse_aux(doc.get("aux"))
    chart = Chart(list(coords), aux=aux)
    n = len(coords)
    x1 = _strings(doc["X1"], "X1")
    x2 = _strings(doc["X2"], "X2")
    completion = tuple(_strings(row, "completion") for row in doc.get("completion", []))
    for label, comps in [("X1", x1), ("X2", x2)] + [(f"X{i + 6}", c) for i, c in enumerate(completion)]:
        if len(comps) != n:
            raise DimensionMismatch(f"{label} has {len(comps)} components for {n} coordinates")
    point_raw = doc.get("base_point", {})
    if not isinstance(point_raw, Mapping):
        raise ParseError("base_point must be a table", 1)
    point: dict[str, Fraction] = {}
    for k, v in point_raw.items():
        if k not in chart.base and k not in chart.aux:
            raise UnknownSymbol(f"base_point names unknown coordinate {k!r}")
        try:
            point[k] = Fraction(_string(v, "base_point value"))
        except ValueError:
            raise ParseError(f"base_point.{k} is not a rational number", 1) from None
    missing = [c for c in coords if c not in point]
    if point and missing:
        raise DimensionMismatch(f"base_point misses {', '.join(missing)}")

    def field_of(comps: Sequence[str]) -> VField:
        return VField(chart, [chart.parse(c) for c in comps])

    spec = DistributionSpec(
        chart,
        field_of(x1),
        field_of(x2),
        point or None,
        _string(doc.get("name", "manifest"), "name"),
        tuple(field_of(c) for c in completion),
    )
    return Manifest(spec, options, None, coords, x1, x2, completion, point, aux)


# -- serialization ------------------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _arr(items: Sequence[str]) -> str:
    return "[" + ", ".join(_q(s) for s in items) + "]"


def serialize(m: Manifest) -> str:
    """Canonical TOML text; expressions are written in the canonical Expr form."""
    lines: list[str] = []
    if m.example is not None:
        lines.append(f"example = {_q(m.example)}")
    else:
        chart = m.spec.chart
        lines.append(f"name = {_q(m.spec.name)}")
        lines.append(f"coordinates = {_arr(m.coordinates)}")
        lines.append(f"X1 = {_arr([str(c) for c in m.spec.x1.coeffs])}")
        lines.append(f"X2 = {_arr([str(c) for c in m.spec.x2.coeffs])}")
        if m.spec.completion:
            rows = ", ".join(_arr([str(c) for c in f.coeffs]) for f in m.spec.completion)
            lines.append(f"completion = [{rows}]")
        if m.base_point:
            body = ", ".join(f"{k} = {_q(format_rational(m.base_point[k]))}" for k in chart.base + chart.aux if k in m.base_point)
            lines.append(f"base_point = {{ {body} }}")
        for a in m.aux:
            lines.append("")
            lines.append("[[aux]]")
            lines.append(f"name = {_q(a.name)}")
            if a.derivatives:
                body = ", ".join(f"{k} = {_q(v)}" for k, v in a.derivatives.items())
                lines.append(f"derivatives = {{ {body} }}")
            if a.rewrite is not None:
                lines.append(f"rewrite = {_arr(a.rewrite)}")
            if a.sample is not None:
                lines.append(f"sample = {_arr(a.sample)}")
    o = m.options
    opt_lines = []
    if o.order is not None:
        opt_lines.append(f"order = {o.order}")
    if o.eps1 is not None:
        opt_lines.append(f"eps1 = {_q(o.eps1)}")
    if o.seed is not None:
        opt_lines.append(f"seed = {o.seed}")
    if o.points:
        opt_lines.append(f"points = {_arr(o.points)}")
    if opt_lines:
        lines += ["", "[options]"] + opt_lines
    return "\n".join(lines) + "\n"


def parse_point(text: str, chart: Chart) -> dict[str, Fraction]:
    """'u4=1,u5=-1/2' -> {'u4': 1, 'u5': -1/2}."""
    out: dict[str, Fraction] = {}
    for col, part in _parts(text):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep:
            raise ParseError(f"expected name=value in {part!r}", 1, col)
        if name not in chart.index:
            raise UnknownSymbol(f"unknown symbol {name!r} in point")
        try:
            out[name] = Fraction(value.strip())
        except ValueError:
            raise ParseError(f"{value.strip()!r} is not a rational number", 1, col) from None
    return out


def _parts(text: str):
    col = 1
    for part in text.split(","):
        if part.strip():
            yield col, part
        col += len(part) + 1
