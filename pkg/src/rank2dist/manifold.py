"""Vector fields on the base manifold, frames and flags of rank-2 distributions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    ChartMismatch,
    CompletionFailed,
    DegenerateFrame,
    DimensionMismatch,
    PoleAtPoint,
    UnknownSymbol,
)
from .symbalg import linalg
from .symbalg.expr import Chart, Expr

Point = Mapping[str, Fraction]


class VField:
    """Vector field sum_m coeffs[m] d/dx_m on the base of a chart."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs: Sequence[Expr | int | Fraction | str]):
        if len(coeffs) != chart.n:
            raise DimensionMismatch(f"expected {chart.n} coefficients, got {len(coeffs)}")
        cs = tuple(chart.coerce(c) for c in coeffs)
        fiber = set(chart.fiber)
        for c in cs:
            bad = c.symbols() & fiber
            if bad:
                raise UnknownSymbol(f"base vector field coefficient uses fiber symbols {sorted(bad)}")
        self.chart = chart
        self.coeffs = cs

    @classmethod
    def from_mapping(cls, chart: Chart, comps: Mapping[str, Expr | str | int | Fraction]) -> "VField":
        coeffs: list[Expr | int] = [0] * chart.n
        for name, v in comps.items():
            if name not in chart.base:
                raise UnknownSymbol(f"{name!r} is not a base coordinate")
            coeffs[chart.base.index(name)] = v
        return cls(chart, coeffs)

    @classmethod
    def coordinate(cls, chart: Chart, i: int) -> "VField":
        return cls(chart, [1 if j == i else 0 for j in range(chart.n)])

    def apply(self, f: Expr) -> Expr:
        if not f.depends_on_base():
            return self.chart.zero()
        return f.derivation(list(zip(self.chart.base, self.coeffs)))

    def __add__(self, other: "VField") -> "VField":
        _same_chart(self, other)
        return VField(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "VField") -> "VField":
        _same_chart(self, other)
        return VField(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "VField":
        return VField(self.chart, [-a for a in self.coeffs])

    def scale(self, f: Expr | int | Fraction) -> "VField":
        return VField(self.chart, [c * f for c in self.coeffs])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, VField) and self.chart == other.chart and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def at(self, point: Point) -> list[Fraction]:
        return [c.eval(point) if not c.is_constant() else c.constant_value() for c in self.coeffs]

    def __repr__(self) -> str:
        parts = [f"({c})*d{x}" for x, c in zip(self.chart.base, self.coeffs) if not c.is_zero()]
        return "VField(" + (" + ".join(parts) or "0") + ")"


def _same_chart(a, b) -> None:
    if a.chart is not b.chart and a.chart != b.chart:
        raise ChartMismatch("vector fields live on different charts")


def lie_bracket(x: VField, y: VField) -> VField:
    """[X, Y] with components X(Y^k) - Y(X^k)."""
    _same_chart(x, y)
    return VField(x.chart, [x.apply(b) - y.apply(a) for a, b in zip(x.coeffs, y.coeffs)])


def ad_power(x: VField, y: VField, i: int) -> VField:
    out = y
    for _ in range(i):
        out = lie_bracket(x, out)
    return out


# -- ranks -------------------------------------------------------------------------

def rank_at(fields: Sequence[VField], point: Point) -> int:
    if not fields:
        return 0
    try:
        rows = [v.at(point) for v in fields]
    except PoleAtPoint:
        raise
    return linalg.rank(rows)


def generic_rank(fields: Sequence[VField], seed: int = 0, symbolic_check: bool = True) -> int:
    """Rank over the rational-function field.

    Evaluated at two random rational points; when the result is deficient the
    answer is confirmed by exact symbolic elimination.
    """
    if not fields:
        return 0
    chart = fields[0].chart
    rng = random.Random(seed)
    best = 0
    full = min(len(fields), chart.n)
    for _ in range(2):
        point = chart.random_point(rng)
        try:
            best = max(best, rank_at(fields, point))
        except PoleAtPoint:
            continue
        if best == full:
            return best
    if symbolic_check:
        return linalg.rank([list(v.coeffs) for v in fields])
    return best


# -- frames ------------------------------------------------------------------------

class Frame:
    """n pointwise independent vector fields with cached structure functions.

    ``structure(i, j)[k]`` are the coefficients of ``[X_i, X_j]`` in the frame
    (0-based indices).  In the notation ``[X_i, X_j] = sum_k c_{ji}^k X_k``,
    ``c(j, i, k)`` returns the same numbers with 1-based indices.
    """

    def __init__(self, fields: Sequence[VField], strongly_adapted: bool = False, base_point: Point | None = None):
        if not fields:
            raise DegenerateFrame("empty frame")
        chart = fields[0].chart
        if len(fields) != chart.n:
            raise DimensionMismatch(f"frame of {len(fields)} fields on a {chart.n}-dimensional chart")
        for f in fields:
            _same_chart(fields[0], f)
        self.chart = chart
        self.n = chart.n
        self.fields = tuple(fields)
        self.strongly_adapted = strongly_adapted
        self.base_point = dict(base_point) if base_point is not None else None
        self._inv: list[list[Expr]] | None = None
        self._struct: dict[tuple[int, int], tuple[Expr, ...]] = {}
        self._zero_struct: dict[tuple[int, int], bool] = {}
        m = [list(f.coeffs) for f in self.fields]
        try:
            self._inv = linalg.inverse(m, chart.one(), chart.zero())
        except Exception as exc:
            raise DegenerateFrame("frame fields are dependent as rational-function vectors") from exc

    def coords_of(self, v: VField) -> list[Expr]:
        """Coefficients of v in the frame (row vector v = sum a_k X_k)."""
        inv = self._inv
        assert inv is not None
        out = []
        for k in range(self.n):
            acc = self.chart.zero()
            for m in range(self.n):
                if not v.coeffs[m].is_zero() and not inv[m][k].is_zero():
                    acc = acc + v.coeffs[m] * inv[m][k]
            out.append(acc)
        return out

    def structure(self, i: int, j: int) -> tuple[Expr, ...]:
        key = (i, j)
        if key not in self._struct:
            if i == j:
                self._struct[key] = tuple(self.chart.zero() for _ in range(self.n))
            elif (j, i) in self._struct:
                self._struct[key] = tuple(-c for c in self._struct[(j, i)])
            else:
                self._struct[key] = tuple(self.coords_of(lie_bracket(self.fields[i], self.fields[j])))
        return self._struct[key]

    def c(self, j: int, i: int, k: int) -> Expr:
        """c_{ji}^k with 1-based indices: [X_i, X_j] = sum_k c_{ji}^k X_k."""
        return self.structure(i - 1, j - 1)[k - 1]

    def derive(self, i: int, f: Expr) -> Expr:
        return self.fields[i].apply(f)

    def has_constant_structure(self) -> bool:
        return all(c.is_constant() for i in range(self.n) for j in range(self.n) for c in self.structure(i, j))

    def reconstruction_defects(self) -> list[tuple[int, int]]:
        """Pairs (i, j) where sum_k c X_k differs from the direct bracket."""
        bad = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                direct = lie_bracket(self.fields[i], self.fields[j])
                acc = VField(self.chart, [0] * self.n)
                for k, c in enumerate(self.structure(i, j)):
                    if not c.is_zero():
                        acc = acc + self.fields[k].scale(c)
                if acc != direct:
                    bad.append((i, j))
        return bad

    def matrix_at(self, point: Point) -> list[list[Fraction]]:
        return [f.at(point) for f in self.fields]


@dataclass(frozen=True)
class DistributionSpec:
    """A rank-2 distribution span(X1, X2) on a chart, with optional base point."""

    chart: Chart
    x1: VField
    x2: VField
    base_point: Mapping[str, Fraction] | None = None
    name: str = ""
    completion: tuple[VField, ...] = field(default_factory=tuple)

    def __post_init__(self):
        _same_chart(self.x1, self.x2)
        if self.x1.chart != self.chart:
            raise ChartMismatch("generators do not live on the declared chart")

    def with_basis(self, x1: VField, x2: VField) -> "DistributionSpec":
        return DistributionSpec(self.chart, x1, x2, self.base_point, self.name, self.completion)

    def point(self) -> dict[str, Fraction]:
        if self.base_point is None:
            raise DimensionMismatch(f"distribution {self.name or '?'} has no base point")
        return dict(self.base_point)


@dataclass(frozen=True)
class FlagDims:
    dims: tuple[int, ...]
    degenerate: bool = False

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]


def build_adapted_frame(
    d: DistributionSpec,
    strong: bool = True,
    completion: Sequence[VField] | None = None,
    corrections: Mapping[int, VField] | None = None,
) -> Frame:
    """Frame (X1, X2, X3, X4, X5, ...) adapted to the flag D, D^2, D^3.

    X3 = [X1,X2], X4 = [X1,X3], X5 = [X2,X3].  With ``strong=False`` the
    optional ``corrections`` (keys 4 and 5, 1-based) are added to X4 and X5;
    they must lie in D^2.  For n > 5 the frame is completed by ``completion``
    or greedily by coordinate fields.
    """
    chart = d.chart
    if chart.n < 5:
        raise DimensionMismatch("adapted frames need n >= 5")
    x1, x2 = d.x1, d.x2
    x3 = lie_bracket(x1, x2)
    x4 = lie_bracket(x1, x3)
    x5 = lie_bracket(x2, x3)
    if not strong and corrections:
        d2 = [x1, x2, x3]
        base_rank = generic_rank(d2)
        for key, corr in corrections.items():
            if key not in (4, 5):
                raise DimensionMismatch("corrections apply to X4 and X5 only")
            if generic_rank(d2 + [corr]) != base_rank:
                raise DegenerateFrame(f"correction to X{key} is not in D^2")
        if 4 in corrections:
            x4 = x4 + corrections[4]
        if 5 in corrections:
            x5 = x5 + corrections[5]
    fields = [x1, x2, x3, x4, x5]
    if generic_rank(fields) < 5:
        raise DegenerateFrame("X1..X5 are generically dependent; growth vector does not start (2,3,5)")
    extra = list(completion if completion is not None else d.completion)
    if chart.n > 5:
        if extra:
            fields += extra
            if len(fields) != chart.n:
                raise CompletionFailed(f"need {chart.n - 5} completion fields, got {len(extra)}")
        else:
            fields += _greedy_completion(fields, d.base_point)
    return Frame(fields, strongly_adapted=strong, base_point=d.base_point)


def _greedy_completion(fields: list[VField], base_point: Point | None) -> list[VField]:
    chart = fields[0].chart
    chosen: list[VField] = []
    current = list(fields)
    for i in range(chart.n):
        if len(current) == chart.n:
            break
        cand = VField.coordinate(chart, i)
        if base_point is not None:
            try:
                ok = rank_at(current + [cand], base_point) == len(current) + 1
            except PoleAtPoint:
                ok = False
        else:
            ok = generic_rank(current + [cand]) == len(current) + 1
        if ok:
            chosen.append(cand)
            current.append(cand)
    if len(current) != chart.n:
        raise CompletionFailed("coordinate fields do not complete the frame")
    return chosen


# -- flags ---------------------------------------------------------------------------

def growth_vector(d: DistributionSpec, q: Point | None = None, depth: int | None = None) -> FlagDims:
    """Dimensions of D(q), D^2(q), ... from iterated brackets evaluated at q."""
    q = d.point() if q is None else q
    n = d.chart.n
    depth = depth if depth is not None else n
    gens = [d.x1, d.x2]
    span = list(gens)
    newest = list(gens)
    dims = [rank_at(span, q)]
    for level in range(2, depth + 1):
        fresh = []
        if level == 2:
            pairs = [(d.x1, d.x2)]
        else:
            pairs = [(g, v) for v in newest for g in gens]
        for g, v in pairs:
            w = lie_bracket(g, v)
            if not w.is_zero():
                fresh.append(w)
        span += fresh
        newest = fresh
        dims.append(rank_at(span, q))
        if dims[-1] == n or not fresh:
            break
    return FlagDims(tuple(dims))


def tangent_flag(d: DistributionSpec, imax: int) -> list[VField]:
    fields = [d.x1, d.x2]
    cur = d.x2
    for _ in range(imax):
        cur = lie_bracket(d.x1, cur)
        fields.append(cur)
    return fields


def tangent_flag_dims(d: DistributionSpec, q: Point | None = None, imax: int | None = None) -> FlagDims:
    """dim span(X1, X2, ad X1 (X2), ..., (ad X1)^i (X2)) at q for i = 0..imax."""
    q = d.point() if q is None else q
    imax = d.chart.n - 2 if imax is None else imax
    fields = tangent_flag(d, imax)
    dims = tuple(rank_at(fields[: i + 2], q) for i in range(imax + 1))
    return FlagDims(dims, degenerate=dims[0] < 2)


def regular_abnormal_check(d: DistributionSpec, q: Point | None = None) -> dict[str, bool]:
    """Constant weight, corank one and regularity of the X1-trajectory through q.

    Regularity is tested as T^(n-2)(q) + D^3(q) = T_qM; under constant weight
    this is the same span as T^(n-3)(q) + [X2,[X1,X2]](q).
    """
    q = d.point() if q is None else q
    n = d.chart.n
    fields = tangent_flag(d, n - 2)
    dim_n3 = rank_at(fields[: n - 1], q)
    dim_n2 = rank_at(fields[: n], q)
    x3 = lie_bracket(d.x1, d.x2)
    d3_extra = lie_bracket(d.x2, x3)
    regular_span = rank_at(fields[: n] + [d3_extra], q)
    return {
        "constant_weight": dim_n3 == n - 1,
        "corank1": dim_n2 == n - 1,
        "regular": regular_span == n and dim_n2 == n - 1,
    }
