"""Built-in distributions.

Names accepted by :func:`get`:

``D0(n)``       polynomial model with X2 = d2 + sum x1^i/i! d_{i+2} + x1 x2 dn
``D1``          free nilpotent (2,3,5) algebra, exponential coordinates
``D2``          SO(3) x R^2, Cayley coordinates on SO(3)
``D3h``         SL(2) x R^2 spanned by (a1, b1), (a2, b2)
``D3e``         SL(2) x R^2 spanned by (a1, b1), (a3, b2)
``rolling(r, rh)``  two spheres of radii r, rh rolling without slipping or twisting
``Dtilde``      the six-dimensional example with growth (2,3,5,6) at 0
``Dbar(n)``     polynomial model whose x1-axis has a weight jump at 0
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Callable, Sequence

from .errors import UnknownSymbol
from .manifold import DistributionSpec, VField
from .symbalg.expr import AuxDecl, Chart, Expr


def _coords(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def _zero_point(chart: Chart) -> dict[str, Fraction]:
    return {name: Fraction(0) for name in chart.base}


def d0(n: int = 5) -> DistributionSpec:
    chart = Chart(_coords(n))
    x1, x2 = chart.x(0), chart.x(1)
    comps: dict[str, Expr] = {chart.base[1]: chart.one()}
    for i in range(1, n - 2):
        comps[chart.base[i + 1]] = x1**i / math.factorial(i)
    comps[chart.base[n - 1]] = comps.get(chart.base[n - 1], chart.zero()) + x1 * x2
    return DistributionSpec(
        chart,
        VField.coordinate(chart, 0),
        VField.from_mapping(chart, comps),
        _zero_point(chart),
        f"D0({n})",
    )


def dbar(n: int = 6) -> DistributionSpec:
    chart = Chart(_coords(n))
    x1, x2 = chart.x(0), chart.x(1)
    comps: dict[str, Expr] = {chart.base[1]: chart.one()}
    for i in range(1, n - 3):
        comps[chart.base[i + 1]] = x1**i / math.factorial(i)
    comps[chart.base[n - 2]] = comps.get(chart.base[n - 2], chart.zero()) + x1 ** (n - 2) / math.factorial(n - 2)
    comps[chart.base[n - 1]] = comps.get(chart.base[n - 1], chart.zero()) + x1 * x2
    return DistributionSpec(
        chart,
        VField.coordinate(chart, 0),
        VField.from_mapping(chart, comps),
        _zero_point(chart),
        f"Dbar({n})",
    )


def dtilde() -> DistributionSpec:
    chart = Chart(_coords(6))
    p = chart.parse
    x2 = VField(chart, [0, 1, p("x1"), p("x1^2/2"), p("x1^4/24 + x1^2*x2/2"), p("x1*x2")])
    return DistributionSpec(chart, VField.coordinate(chart, 0), x2, _zero_point(chart), "Dtilde")


# -- left-invariant models ----------------------------------------------------------

def _bracket_from_table(table: dict[tuple[int, int], dict[int, int]], a: Sequence[Expr], b: Sequence[Expr]) -> list[Expr]:
    zero = a[0] * 0
    out = [zero for _ in a]
    for (i, j), res in table.items():
        coef = a[i] * b[j] - a[j] * b[i]
        if coef.is_zero():
            continue
        for k, c in res.items():
            out[k] = out[k] + coef * c
    return out


def d1() -> DistributionSpec:
    """Left-invariant fields X_a(x) = a + [x,a]/2 + [x,[x,a]]/12 in exponential coordinates."""
    chart = Chart(_coords(5))
    table = {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {4: 1}}
    xs = [chart.x(i) for i in range(5)]

    def field(k: int) -> VField:
        a = [chart.one() if i == k else chart.zero() for i in range(5)]
        xa = _bracket_from_table(table, xs, a)
        xxa = _bracket_from_table(table, xs, xa)
        return VField(chart, [a[i] + xa[i] / 2 + xxa[i] / 12 for i in range(5)])

    return DistributionSpec(chart, field(0), field(1), _zero_point(chart), "D1")


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), a[0][0] * 0) for j in range(n)] for i in range(n)]


def _cayley_field(chart: Chart, amat, a, decompose) -> list[Expr]:
    """Components of A -> (I + A) a (I - A) / 2 in the algebra basis."""
    n = len(amat)
    one, zero = chart.one(), chart.zero()
    ip = [[(one if i == j else zero) + amat[i][j] for j in range(n)] for i in range(n)]
    im = [[(one if i == j else zero) - amat[i][j] for j in range(n)] for i in range(n)]
    prod = _matmul(_matmul(ip, [[chart.const(v) for v in row] for row in a]), im)
    prod = [[v / 2 for v in row] for row in prod]
    return decompose(prod)


def _so3_group_model(name: str, gens: tuple[int, int]) -> DistributionSpec:
    chart = Chart(_coords(5))
    x = [chart.x(i) for i in range(5)]
    z = chart.zero()
    # a1 = E12 - E21, a2 = E13 - E31, a3 = E32 - E23
    amat = [[z, x[0], x[1]], [-x[0], z, -x[2]], [-x[1], x[2], z]]
    basis = [
        [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
        [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
    ]

    def decompose(m):
        return [m[0][1], m[0][2], m[2][1]]

    def field(a_index: int, b_index: int) -> VField:
        comps = _cayley_field(chart, amat, basis[a_index], decompose)
        rest = [chart.one() if k == b_index else chart.zero() for k in range(2)]
        return VField(chart, comps + rest)

    return DistributionSpec(chart, field(gens[0], 0), field(gens[1], 1), _zero_point(chart), name)


def _sl2_group_model(name: str, gens: tuple[int, int]) -> DistributionSpec:
    chart = Chart(_coords(5))
    x = [chart.x(i) for i in range(5)]
    half = Fraction(1, 2)
    # A = x1 a1 + x2 a2 + x3 a3 with a1 = (E11-E22)/2, a2 = (E12-E21)/2, a3 = (E12+E21)/2
    amat = [[x[0] * half, (x[1] + x[2]) * half], [(x[2] - x[1]) * half, -x[0] * half]]
    basis = [
        [[half, 0], [0, -half]],
        [[0, half], [-half, 0]],
        [[0, half], [half, 0]],
    ]

    def decompose(m):
        return [m[0][0] * 2, m[0][1] - m[1][0], m[0][1] + m[1][0]]

    def field(a_index: int, b_index: int) -> VField:
        comps = _cayley_field(chart, amat, basis[a_index], decompose)
        rest = [chart.one() if k == b_index else chart.zero() for k in range(2)]
        return VField(chart, comps + rest)

    return DistributionSpec(chart, field(gens[0], 0), field(gens[1], 1), _zero_point(chart), name)


def d2() -> DistributionSpec:
    return _so3_group_model("D2", (0, 1))


def d3h() -> DistributionSpec:
    return _sl2_group_model("D3h", (0, 1))


def d3e() -> DistributionSpec:
    return _sl2_group_model("D3e", (0, 2))


# -- rolling spheres --------------------------------------------------------------------

ROLLING_AUX = (
    AuxDecl("sb", {"beta": "cb"}, ("sb^2", "1 - cb^2"), ("beta", "2*t/(1 + t^2)")),
    AuxDecl("cb", {"beta": "-sb"}, None, ("beta", "(1 - t^2)/(1 + t^2)")),
    AuxDecl("kp", {"phi": "-kp*gp"}, ("kp^2", "1 + gp^2"), ("phi", "(1 + t^2)/(2*t)")),
    AuxDecl("gp", {"phi": "-1 - gp^2"}, None, ("phi", "(1 - t^2)/(2*t)")),
    AuxDecl("kq", {"phih": "-kq*gq"}, ("kq^2", "1 + gq^2"), ("phih", "(1 + t^2)/(2*t)")),
    AuxDecl("gq", {"phih": "-1 - gq^2"}, None, ("phih", "(1 - t^2)/(2*t)")),
)

ROLLING_POINT = {
    "psi": Fraction(0),
    "psih": Fraction(0),
    "sb": Fraction(4, 5),
    "cb": Fraction(3, 5),
    "kp": Fraction(5, 4),
    "gp": Fraction(3, 4),
    "kq": Fraction(5, 3),
    "gq": Fraction(4, 3),
}


def rolling_chart() -> Chart:
    return Chart(["phi", "psi", "phih", "psih", "beta"], aux=ROLLING_AUX)


def rolling(r: Fraction | int | str = 1, rh: Fraction | int | str = 2) -> DistributionSpec:
    """Spheres of radii r and rh; sb, cb = sin, cos beta; kp, gp = csc, cot phi (kq, gq for phih).

    Frames v1 = d_phi / r, v2 = csc(phi) d_psi / r on each sphere; the beta
    component is fixed by the no-twisting condition.
    """
    r, rh = Fraction(r), Fraction(rh)
    chart = rolling_chart()
    s = chart.sym
    one = chart.one()
    zero = chart.zero()
    x1 = VField(chart, [one / r, zero, s("cb") / rh, s("sb") * s("kq") / rh, -s("gq") * s("sb") / rh])
    x2 = VField(chart, [zero, s("kp") / r, -s("sb") / rh, s("cb") * s("kq") / rh, s("gp") / r - s("gq") * s("cb") / rh])
    return DistributionSpec(chart, x1, x2, dict(ROLLING_POINT), f"rolling({_fmt(r)},{_fmt(rh)})")


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- registry -------------------------------------------------------------------------------

_BUILDERS: dict[str, Callable[..., DistributionSpec]] = {
    "D0": d0,
    "D1": d1,
    "D2": d2,
    "D3h": d3h,
    "D3e": d3e,
    "rolling": rolling,
    "Dtilde": dtilde,
    "Dbar": dbar,
}

_NAME = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\(([^)]*)\))?\s*$")


def names() -> list[str]:
    return list(_BUILDERS)


def get(spec: str) -> DistributionSpec:
    m = _NAME.match(spec)
    if not m or m.group(1) not in _BUILDERS:
        raise UnknownSymbol(f"unknown catalog entry {spec!r}; known: {', '.join(_BUILDERS)}")
    args = [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
    builder = _BUILDERS[m.group(1)]
    if m.group(1) in ("D0", "Dbar"):
        return builder(*(int(a) for a in args))
    if m.group(1) == "rolling":
        return builder(*(Fraction(a) for a in args))
    if args:
        raise UnknownSymbol(f"catalog entry {m.group(1)} takes no parameters")
    return builder()


def catalog() -> list[DistributionSpec]:
    """Every built-in entry with its default parameters."""
    return [d0(5), d1(), d2(), d3h(), d3e(), rolling(1, 2), rolling(1, 3), dtilde(), dbar(6)]
