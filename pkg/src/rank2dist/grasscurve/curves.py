"""Curves of symmetric matrices t -> S_t and their projective invariants.

A curve in the Lagrange Grassmannian of W = R^m + R^m is given by the graph
{(x, S_t x)}; the symplectic form on W is sigma((x, y), (x', y')) = y.x' - x.y'.
Two-point quantities are expanded in the coordinates p = t0 + t1,
s = t0 - t1, where the diagonal is s = 0 and

    d/dt0 = d/dp + d/ds,   d/dt1 = d/dp - d/ds,   d2/dt0 dt1 = d2/dp2 - d2/ds2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import (
    DimensionMismatch,
    NonMonotone,
    NotDivisible,
    NotJumpOne,
    NotLagrangian,
    OrderUnderflow,
    ParseError,
)
from ..symbalg import linalg
from ..symbalg.series import Series1, Series2, mat_adj, mat_det, mat_mul, mat_trace

PS = ("p", "s")
T01 = ("t0", "t1")


def _series(v, order: int | None) -> Series1:
    if isinstance(v, Series1):
        return v if order is None else v.truncate(order)
    if isinstance(v, (list, tuple)):
        return Series1.from_coeffs(v, 0, order)
    return Series1.const(v, order)


@dataclass(frozen=True)
class MatCurve:
    """Square m x m matrix of truncated series in t.

    With ``lagrangian=True`` (the default) the matrix must be symmetric and the
    curve lives in the Lagrange Grassmannian; otherwise it is a curve of graphs
    in the Grassmannian of m-planes in R^{2m}.
    """

    entries: tuple[tuple[Series1, ...], ...]
    lagrangian: bool = True

    def __post_init__(self):
        m = len(self.entries)
        if m == 0 or any(len(row) != m for row in self.entries):
            raise DimensionMismatch("a curve needs a square matrix of series")
        if not self.lagrangian:
            return
        for i in range(m):
            for j in range(i + 1, m):
                if not self.entries[i][j].agrees_with(self.entries[j][i]):
                    raise NotLagrangian(f"S_t is not symmetric in entry ({i + 1},{j + 1})")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], order: int | None = None,
                  lagrangian: bool = True) -> "MatCurve":
        """Rows of entries; an entry is a Series1, a coefficient list or a constant."""
        return cls(tuple(tuple(_series(v, order) for v in row) for row in rows), lagrangian)

    @classmethod
    def from_generator(cls, u: Sequence[Sequence[object]], order: int,
                       v: Sequence[Sequence[object]] | None = None) -> "MatCurve":
        """S_t = integral_0^t u(s) v(s)^T ds for polynomial vectors given by coefficient lists.

        Without ``v`` the curve is the Lagrangian one generated by u u^T.
        """
        us = [Series1.from_coeffs(c, 0, None) for c in u]
        vs = us if v is None else [Series1.from_coeffs(c, 0, None) for c in v]
        if len(us) != len(vs):
            raise DimensionMismatch("generator vectors differ in length")
        m = len(us)
        rows = [[(us[i] * vs[j]).integrate().truncate(order) for j in range(m)] for i in range(m)]
        return cls(tuple(tuple(r) for r in rows), v is None)

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def order(self) -> int | None:
        precs = [e.prec for row in self.entries for e in row if e.prec is not None]
        return min(precs) if precs else None

    def truncate(self, order: int) -> "MatCurve":
        return self._map(lambda e: e.truncate(order))

    def _map(self, f: Callable[[Series1], Series1]) -> "MatCurve":
        return MatCurve(tuple(tuple(f(e) for e in row) for row in self.entries), self.lagrangian)

    def coefficient(self, k: int) -> list[list[Fraction]]:
        return [[e.coeff(k) for e in row] for row in self.entries]

    def derivative(self) -> "MatCurve":
        return self._map(lambda e: e.diff())

    def scale(self, c) -> "MatCurve":
        return self._map(lambda e: e * c)

    def compose(self, phi: Series1) -> "MatCurve":
        return self._map(lambda e: e.compose(phi))

    def rows(self) -> list[list[Series1]]:
        return [list(row) for row in self.entries]

    # -- text form ----------------------------------------------------------------

    def to_text(self) -> str:
        """One line per entry ``i j: c0 c1 ...`` (ascending powers of t).

        Lagrangian curves list the upper triangle only.
        """
        order = self.order
        if order is None:
            order = 1 + max((max(e.terms) for row in self.entries for e in row if e.terms), default=0)
        kind = "lagrangian" if self.lagrangian else "general"
        lines = [f"# m={self.m} order={order} kind={kind}"]
        for i in range(self.m):
            for j in range(i if self.lagrangian else 0, self.m):
                e = self.entries[i][j]
                if e.terms and min(e.terms) < 0:
                    raise DimensionMismatch("curve entries must be power series")
                coeffs = " ".join(_fmt(e.coeff(k)) for k in range(order))
                lines.append(f"{i + 1} {j + 1}: {coeffs}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MatCurve":
        order = None
        lagrangian = True
        found: dict[tuple[int, int], list[Fraction]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("order="):
                        order = int(token[6:])
                    elif token == "kind=general":
                        lagrangian = False
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError("expected 'i j: coefficients'", lineno)
            try:
                i, j = (int(x) for x in head.split())
                coeffs = [Fraction(x) for x in tail.split()]
            except ValueError as exc:
                raise ParseError(f"bad curve entry: {exc}", lineno) from None
            if i < 1 or j < 1:
                raise ParseError("entry indices start at 1", lineno)
            found[(i, j)] = coeffs
            if lagrangian:
                found.setdefault((j, i), coeffs)
        if not found:
            raise ParseError("no curve entries", 1)
        m = max(max(k) for k in found)
        if order is None:
            order = max(len(c) for c in found.values())
        rows = [[Series1.from_coeffs(found.get((i, j), []), 0, order) for j in range(1, m + 1)]
                for i in range(1, m + 1)]
        return cls(tuple(tuple(r) for r in rows), lagrangian)


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- two-point expansions -------------------------------------------------------------

def _powers_half(k: int, sign: int) -> dict[tuple[int, int], Fraction]:
    """((p + sign*s)/2)^k."""
    out = {}
    for a in range(k + 1):
        c = Fraction(math.comb(k, a), 2**k) * (sign ** (k - a))
        out[(a, k - a)] = c
    return out


def _at_point(f: Series1, which: int) -> Series2:
    """f(t0) (which=0) or f(t1) (which=1) in the (p, s) coordinates."""
    if f.terms and min(f.terms) < 0:
        raise ValueError("two-point expansion of a Laurent series")
    sign = 1 if which == 0 else -1
    terms: dict[tuple[int, int], Fraction] = {}
    for k, c in f.terms.items():
        for key, b in _powers_half(k, sign).items():
            terms[key] = terms.get(key, 0) + c * b
    return Series2(terms, f.prec, PS)


def _difference(f: Series1) -> Series2:
    """f(t0) - f(t1) in (p, s)."""
    return _at_point(f, 0) - _at_point(f, 1)


def two_point_matrix(curve: MatCurve) -> list[list[Series2]]:
    """S_{t0} - S_{t1} as a matrix of series in (p, s)."""
    return [[_difference(e) for e in row] for row in curve.entries]


def det_series(curve: MatCurve) -> Series2:
    return mat_det(two_point_matrix(curve))


def _valuation_in_s(d: Series2) -> int:
    if d.is_zero():
        raise OrderUnderflow("det(S_t0 - S_t1) vanishes to the tracked order; increase the truncation")
    return min(j for _, j in d.terms)


# -- weight and rank ------------------------------------------------------------------------

def weight_rank(curve: MatCurve) -> tuple[int, int]:
    """(weight, rank) at t = 0.

    The rank is that of the lowest nonzero Taylor coefficient of S_t - S_0, which
    is the rank of the velocity whenever the velocity does not vanish at 0.
    """
    d = mat_det([[e - e.coeff(0) for e in row] for row in curve.entries])
    if d.is_zero():
        raise OrderUnderflow("det(S_t - S_0) vanishes to the tracked order; increase the truncation")
    k = d.valuation()
    r = 0
    for j in range(1, k + 1):
        r = linalg.rank(curve.coefficient(j))
        if r:
            break
    return k, r


def generic_weight(curve: MatCurve) -> int:
    """Weight at nearby parameters: the order of det(S_t0 - S_t1) along the diagonal."""
    return _valuation_in_s(det_series(curve))


# -- generating function ------------------------------------------------------------------

def _box(f: Series2) -> Series2:
    """d2/dt0 dt1 in (p, s)."""
    return f.diff(0).diff(0) - f.diff(1).diff(1)


def _along_t0(f: Series2) -> Series2:
    return f.diff(0) + f.diff(1)


def _on_diagonal(f: Series2) -> Series1:
    """t -> f(p = 2t, s = 0)."""
    line = f.coefficient_series(1, 0)
    return Series1({k: c * Fraction(2) ** k for k, c in line.terms.items()}, line.prec)


@dataclass(frozen=True)
class GJets:
    """Generating function g(t0, t1) of a constant-weight curve near (0, 0)."""

    weight: int
    g: Series2  # in (p, s)

    def in_t(self) -> Series2:
        """Taylor coefficients of g in (t0, t1)."""
        return self.g.linear_change([[1, 1], [1, -1]], T01)

    def diagonal(self) -> Series1:
        return _on_diagonal(self.g)

    def second_t0(self) -> Series1:
        return _on_diagonal(_along_t0(_along_t0(self.g)))


def generating_jets(curve: MatCurve, order: int | None = None) -> GJets:
    """g = d2/dt0 dt1 log(det(S_t0 - S_t1) / (t0 - t1)^k) around (0, 0)."""
    if order is not None:
        curve = curve.truncate(order)
    if curve.order is None:
        raise OrderUnderflow("an exact curve needs a truncation order for the generating function")
    d = det_series(curve)
    k = _valuation_in_s(d)
    x = d.divide_by_power(1, k)
    try:
        const = x.coeff(0, 0)
    except OrderUnderflow:
        const = 0
    if const == 0:
        raise NotDivisible("the weight is not constant at 0; use the jump path")
    return GJets(k, _box(x.log()))


def ricci_and_density(jets: GJets) -> tuple[Series1, Series1]:
    """rho(t) = g(t, t) and A(t) = 1/2 g_t0t0 - 3/(5k) rho^2 - 3/20 rho''."""
    rho = jets.diagonal()
    a = jets.second_t0() * Fraction(1, 2) - rho * rho * Fraction(3, 5 * jets.weight) - rho.diff().diff() * Fraction(3, 20)
    return rho, a


def curve_invariants(curve: MatCurve, order: int | None = None) -> tuple[Series1, Series1]:
    return ricci_and_density(generating_jets(curve, order))


# -- infinitesimal cross-ratio ------------------------------------------------------------------

def cross_ratio_trace_check(curve: MatCurve, order: int | None = None) -> Series2:
    """tr((S1 - S0)^-1 S1' (S0 - S1)^-1 S0') + k/(t0 - t1)^2 + g, in (p, s)."""
    if order is not None:
        curve = curve.truncate(order)
    jets = generating_jets(curve)
    mat = two_point_matrix(curve)
    d = mat_det(mat)
    dinv = d.inverse()
    inv = [[c * dinv for c in row] for row in mat_adj(mat)]
    vel = curve.derivative()
    v0 = [[_at_point(e, 0) for e in row] for row in vel.entries]
    v1 = [[_at_point(e, 1) for e in row] for row in vel.entries]
    prod = mat_mul(mat_mul(mat_mul(inv, v1), inv), v0)
    trace = -mat_trace(prod)
    pole = Series2({(0, -2): jets.weight}, None, PS)
    return trace + pole + jets.g


# -- reparametrization ----------------------------------------------------------------------------

def schwarzian(phi: Series1) -> Series1:
    d1 = phi.diff()
    if d1.coeff(0) == 0:
        raise NonMonotone("phi'(0) = 0")
    r = phi.diff().diff() / d1
    return phi.diff().diff().diff() / d1 * Fraction(1, 2) - r * r * Fraction(3, 4)


def mobius(a, b, c, d, order: int) -> Series1:
    """(a t + b) / (c t + d) as a series at 0."""
    num = Series1.from_coeffs([b, a], 0, order)
    den = Series1.from_coeffs([d, c], 0, order)
    return num / den


@dataclass(frozen=True)
class ReparamResidual:
    g: Series2
    rho: Series1
    schwarzian: Series1

    def vanishes(self) -> bool:
        return self.g.is_zero() and self.rho.is_zero()


def reparametrization_check(curve: MatCurve, phi: Series1, order: int | None = None) -> ReparamResidual:
    """Residuals of the chain rule for g and of the Schwarzian rule for rho under t -> phi(t)."""
    if phi.coeff(0) != 0:
        raise ValueError("phi must fix 0 so that both curves are expanded at the same point")
    dphi = phi.diff()
    if dphi.coeff(0) == 0:
        raise NonMonotone("phi'(0) = 0")
    if order is not None:
        curve = curve.truncate(order)
        phi = phi.truncate(order)
    base = generating_jets(curve)
    moved = generating_jets(curve.compose(phi))
    k = base.weight
    f0, f1 = _at_point(phi, 0), _at_point(phi, 1)
    g_t = base.in_t()
    pulled = g_t.compose(f0, f1) * _at_point(dphi, 0) * _at_point(dphi, 1)
    quotient = (f0 - f1).divide_by_power(1, 1)
    numer = _at_point(dphi, 0) * _at_point(dphi, 1) - quotient * quotient
    corr = numer.divide_by_power(1, 2) / (quotient * quotient) * k
    res_g = moved.g - pulled - corr
    rho_new = moved.diagonal()
    rho_old = base.diagonal()
    sch = schwarzian(phi)
    res_rho = rho_new - rho_old.compose(phi) * dphi * dphi - sch * Fraction(k, 3)
    return ReparamResidual(res_g, res_rho, sch)


# -- weight jump -------------------------------------------------------------------------------------

def _p_to_t(f: Series1) -> Series1:
    """f(p) -> f(2t)."""
    return Series1({k: c * Fraction(2) ** k for k, c in f.terms.items()}, f.prec)


def diagonal_invariants(curve: MatCurve, order: int | None = None) -> tuple[int, Series1, Series1]:
    """(k, rho, A) as Laurent series at 0 for a curve whose weight may jump at 0.

    With X = det(S_t0 - S_t1)/s^k = sum_j X_j(p) s^j, log X is expanded as a
    polynomial of degree 4 in s whose coefficients are Laurent series in p.
    That is all the diagonal needs: g = d2/dp2 L - d2/ds2 L at s = 0 for rho,
    and (d/dp + d/ds)^2 g at s = 0 for A.
    """
    if order is not None:
        curve = curve.truncate(order)
    if curve.order is None:
        raise OrderUnderflow("an exact curve needs a truncation order")
    d = det_series(curve)
    k = _valuation_in_s(d)
    x = d.divide_by_power(1, k)
    xs = [x.coefficient_series(1, j) for j in range(5)]
    x0 = xs[0]
    if x0.is_zero():
        raise OrderUnderflow("X(t, t) vanishes to the tracked order")
    v0 = x0.valuation()
    c0 = x0.coeff(v0)
    unit = x0.shift(-v0) * (1 / c0)
    ratios = [None] + [xj / x0 for xj in xs[1:]]
    # log(1 + Y), Y = sum_{j>=1} ratios[j] s^j, kept to s^4
    y = {j: ratios[j] for j in range(1, 5)}
    logs: dict[int, Series1] = {}
    power = dict(y)
    for n in range(1, 5):
        for j, c in power.items():
            term = c * Fraction((-1) ** (n + 1), n)
            logs[j] = logs[j] + term if j in logs else term
        nxt: dict[int, Series1] = {}
        for i, a in power.items():
            for j, b in y.items():
                if i + j <= 4:
                    nxt[i + j] = nxt[i + j] + a * b if i + j in nxt else a * b
        power = nxt
    zero = Series1({}, None)
    lj = [zero] + [logs.get(j, zero) for j in range(1, 5)]
    # L_0 = v0 log p + log(unit); only its second derivative enters
    l0pp = Series1({-2: -v0}, None) + unit.log().diff().diff()

    def second(j: int) -> Series1:
        return l0pp if j == 0 else lj[j].diff().diff()

    g = [second(j) - lj[j + 2] * ((j + 2) * (j + 1)) for j in range(3)]
    rho = _p_to_t(g[0])
    g00 = _p_to_t(g[0].diff().diff() + g[1].diff() * 2 + g[2] * 2)
    dens = g00 * Fraction(1, 2) - rho * rho * Fraction(3, 5 * k) - rho.diff().diff() * Fraction(3, 20)
    return k, rho, dens


@dataclass(frozen=True)
class JumpReport:
    weight_at_zero: int
    nearby_weight: int
    rho: Series1
    density: Series1
    factorizes: bool  # X = (t0 + t1) a(t0, t1) exactly, a smooth

    @property
    def jump(self) -> int:
        return self.weight_at_zero - self.nearby_weight

    @property
    def rho_pole_coeff(self) -> Fraction:
        return self.rho.coeff(-2)

    @property
    def a_pole_coeff(self) -> Fraction:
        return self.density.coeff(-4)

    @property
    def predicted_a_pole(self) -> Fraction:
        k = self.nearby_weight
        return Fraction(3 * (k - 1), 80 * k)

    @property
    def density_is_singular(self) -> bool:
        return bool(self.density.terms) and min(self.density.terms) < 0


def weight_jump_report(curve: MatCurve, order: int | None = None) -> JumpReport:
    """Weights at 0 and nearby with Laurent rho and A, for a jump of any size."""
    if order is not None:
        curve = curve.truncate(order)
    k0, _ = weight_rank(curve)
    k, rho, dens = diagonal_invariants(curve)
    x = det_series(curve).divide_by_power(1, k)
    factorizes = k0 == k + 1 and all(i >= 1 for i, _ in x.terms)
    return JumpReport(k0, k, rho, dens, factorizes)


def jump_asymptotics(curve: MatCurve, order: int | None = None) -> JumpReport:
    """Laurent expansions of rho and A at a point where the weight jumps by one.

    X = det(S_t0 - S_t1)/(t0 - t1)^k is then symmetric with lowest form
    c (t0 + t1); the -1/(t0 + t1)^2 it contributes to g carries both leading poles.
    """
    if order is not None:
        curve = curve.truncate(order)
    if curve.order is None:
        raise OrderUnderflow("an exact curve needs a truncation order")
    k0, _ = weight_rank(curve)
    d = det_series(curve)
    k = _valuation_in_s(d)
    if k0 != k + 1:
        raise NotJumpOne(f"weight {k0} at 0 and {k} nearby is not a jump by one")
    x = d.divide_by_power(1, k)
    if set(x.lowest_form()) != {(1, 0)}:
        raise NotJumpOne("the lowest form of det(S_t0 - S_t1)/(t0 - t1)^k is not a multiple of t0 + t1")
    if any(j % 2 for _, j in x.terms):
        raise NotJumpOne("det(S_t0 - S_t1)/(t0 - t1)^k is not symmetric in t0, t1")
    return weight_jump_report(curve)


def jump_one_search(order: int = 14, max_degree: int = 2,
                    coeff_range: Sequence[int] = (-1, 0, 1, 2),
                    factorized: bool = True) -> tuple[list[list[int]], list[list[int]], MatCurve]:
    """First curve S_t = integral u v^T in G_2(R^4) with weight 4 nearby and 5 at 0.

    Generators are u = (1, u2(s)), v = (1, v2(s)) with u2, v2 polynomials
    without constant term, searched by increasing degree.  With ``factorized``
    the curve must also satisfy X = (t0 + t1) a(t0, t1) exactly.  A symmetric
    rank-one curve never qualifies: its weight at a point is always even.
    """
    for deg in range(1, max_degree + 1):
        tails = [t for t in itertools.product(coeff_range, repeat=deg) if any(t)]
        for tu in tails:
            for tv in tails:
                u = [[1], [0, *tu]]
                v = [[1], [0, *tv]]
                curve = MatCurve.from_generator(u, order, v)
                try:
                    k0, _ = weight_rank(curve)
                    k = generic_weight(curve)
                except OrderUnderflow:
                    continue
                if (k0, k) != (5, 4):
                    continue
                if factorized and not jump_asymptotics(curve).factorizes:
                    continue
                return u, v, curve
    raise NotJumpOne("no jump-one curve in the search range")
