"""Symplectic calculus on T*M in the fiber coordinates u_i = p(X_i) of a frame.

A tangent vector to T*M is written as ``sum a_i Xh_i + sum b_j d/du_j`` where
``Xh_i`` is the lift of the frame field X_i that keeps every u_j fixed.  The
coordinate form (coefficients of d/dx and d/du) is available through
:meth:`CoField.coordinate_view`.  With ``C_ij`` the frame coordinates of
[X_i, X_j], the lifts satisfy ``[Xh_i, Xh_j] = sum_k C_ij^k Xh_k``.

(D^2)^perp is the subset u1 = u2 = u3 = 0.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

from .errors import (
    BasePointOnD3perp,
    ChartMismatch,
    DimensionMismatch,
    GeometryError,
    NotHomogeneous,
    NotHypersurface,
    NotPolynomial,
    PoleAtPoint,
    WrongDimension,
    ZeroPolynomial,
)
from .manifold import Frame, FlagDims, VField, lie_bracket
from .symbalg import linalg
from .symbalg.expr import Chart, Expr, poly_divides, random_rational, squarefree_radical

Point = Mapping[str, Fraction]


class CoField:
    """Vector field on T*M in the frame-lift basis."""

    __slots__ = ("frame", "base", "fiber", "_coords")

    def __init__(self, frame: Frame, base: Sequence[Expr], fiber: Sequence[Expr]):
        n = frame.n
        if len(base) != n or len(fiber) != n:
            raise DimensionMismatch(f"cotangent field needs {n}+{n} coefficients")
        chart = frame.chart
        self.frame = frame
        self.base = tuple(chart.coerce(c) for c in base)
        self.fiber = tuple(chart.coerce(c) for c in fiber)

    @property
    def chart(self) -> Chart:
        return self.frame.chart

    @classmethod
    def zero(cls, frame: Frame) -> "CoField":
        z = frame.chart.zero()
        return cls(frame, [z] * frame.n, [z] * frame.n)

    def apply(self, f: Expr) -> Expr:
        """Derivative of a function of (x, u) along the field."""
        return f.derivation(self._coordinate_coeffs())

    def _coordinate_coeffs(self) -> list[tuple[str, Expr]]:
        try:
            return self._coords
        except AttributeError:
            pass
        chart = self.chart
        out = []
        for k, name in enumerate(chart.base):
            c = chart.zero()
            for a, fld in zip(self.base, self.frame.fields):
                if not a.is_zero() and not fld.coeffs[k].is_zero():
                    c = c + a * fld.coeffs[k]
            out.append((name, c))
        out += list(zip(chart.fiber, self.fiber))
        self._coords = out
        return out

    def _check(self, other: "CoField") -> None:
        if other.frame is not self.frame:
            raise ChartMismatch("cotangent fields built from different frames")

    def __add__(self, other: "CoField") -> "CoField":
        self._check(other)
        return CoField(
            self.frame,
            [a + b for a, b in zip(self.base, other.base)],
            [a + b for a, b in zip(self.fiber, other.fiber)],
        )

    def __sub__(self, other: "CoField") -> "CoField":
        self._check(other)
        return CoField(
            self.frame,
            [a - b for a, b in zip(self.base, other.base)],
            [a - b for a, b in zip(self.fiber, other.fiber)],
        )

    def __neg__(self) -> "CoField":
        return CoField(self.frame, [-a for a in self.base], [-b for b in self.fiber])

    def scale(self, f: Expr | int | Fraction) -> "CoField":
        return CoField(self.frame, [a * f for a in self.base], [b * f for b in self.fiber])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.base + self.fiber)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoField)
            and other.frame is self.frame
            and self.base == other.base
            and self.fiber == other.fiber
        )

    def __hash__(self) -> int:
        return hash((self.base, self.fiber))

    def restrict(self) -> "CoField":
        """Coefficients with u1 = u2 = u3 = 0 substituted (values on (D^2)^perp)."""
        return CoField(self.frame, [_on_d2perp(c) for c in self.base], [_on_d2perp(c) for c in self.fiber])

    def at(self, lam: Point) -> list[Fraction]:
        return [_eval(c, lam) for c in self.base + self.fiber]

    def coordinate_view(self) -> tuple[list[Expr], list[Expr]]:
        """Coefficients of d/dx_m and d/du_j."""
        chart = self.chart
        xs = [chart.zero() for _ in range(self.frame.n)]
        for a, field in zip(self.base, self.frame.fields):
            if a.is_zero():
                continue
            for m, c in enumerate(field.coeffs):
                if not c.is_zero():
                    xs[m] = xs[m] + a * c
        return xs, list(self.fiber)

    def projection(self) -> VField:
        """Base part pi_* V as a vector field (fiber symbols must be absent)."""
        return VField(self.chart, self.coordinate_view()[0])

    def __repr__(self) -> str:
        parts = [f"({c})*X{i + 1}" for i, c in enumerate(self.base) if not c.is_zero()]
        parts += [f"({c})*du{j + 1}" for j, c in enumerate(self.fiber) if not c.is_zero()]
        return "CoField(" + (" + ".join(parts) or "0") + ")"


def _on_d2perp(e: Expr) -> Expr:
    chart = e.chart
    syms = e.symbols()
    zero = {name: 0 for name in chart.fiber[:3] if name in syms}
    return e.subs(zero) if zero else e


def _eval(e: Expr, lam: Point) -> Fraction:
    if e.is_constant():
        return e.constant_value()
    return e.eval(lam)


def co_bracket(v: CoField, w: CoField) -> CoField:
    """Lie bracket of two vector fields on T*M."""
    v._check(w)
    frame = v.frame
    n = frame.n
    base = [v.apply(c) - w.apply(a) for a, c in zip(v.base, w.base)]
    for i, a in enumerate(v.base):
        if a.is_zero():
            continue
        for j, c in enumerate(w.base):
            if c.is_zero() or i == j:
                continue
            ac = a * c
            for k, s in enumerate(frame.structure(i, j)):
                if not s.is_zero():
                    base[k] = base[k] + ac * s
    fiber = [v.apply(d) - w.apply(b) for b, d in zip(v.fiber, w.fiber)]
    assert len(base) == n
    return CoField(frame, base, fiber)


def ad_power(h: CoField, v: CoField, j: int) -> CoField:
    out = v
    for _ in range(j):
        out = co_bracket(h, out)
    return out


def ad_sequence(h: CoField, v: CoField, j: int, on_d2perp: bool = False) -> list[CoField]:
    """[v, ad h (v), ..., (ad h)^j (v)].

    With ``on_d2perp`` the results are only correct after restriction to
    u1 = u2 = u3 = 0: each bracket with h lowers the degree in u1..u3 by at
    most one, so terms of higher degree than the remaining steps are dropped.
    """
    out = [v]
    names = v.chart.fiber[:3]
    for step in range(j):
        w = co_bracket(h, out[-1])
        if on_d2perp:
            left = j - step - 1
            w = CoField(
                w.frame,
                [c.truncate_in(names, left) for c in w.base],
                [c.truncate_in(names, left) for c in w.fiber],
            )
        out.append(w)
    return out


def symplectic(v: CoField, w: CoField) -> Expr:
    """sigma(V, W), normalized so that sigma(u_i-field, W) = du_i(W)."""
    v._check(w)
    frame = v.frame
    chart = frame.chart
    out = chart.zero()
    for a, d in zip(v.base, w.fiber):
        if not a.is_zero() and not d.is_zero():
            out = out + a * d
    for b, c in zip(v.fiber, w.base):
        if not b.is_zero() and not c.is_zero():
            out = out - b * c
    us = [chart.u(k) for k in range(frame.n)]
    for i, a in enumerate(v.base):
        if a.is_zero():
            continue
        for j, c in enumerate(w.base):
            if c.is_zero() or i == j:
                continue
            p = chart.zero()
            for k, s in enumerate(frame.structure(i, j)):
                if not s.is_zero():
                    p = p + s * us[k]
            if not p.is_zero():
                out = out + a * c * p
    return out


# -- distinguished fields ----------------------------------------------------------

def poisson(frame: Frame, i: int, j: int) -> Expr:
    """{u_i, u_j} = du_j(u_i-field) = p([X_i, X_j]) (1-based indices)."""
    chart = frame.chart
    out = chart.zero()
    for k, s in enumerate(frame.structure(i - 1, j - 1)):
        if not s.is_zero():
            out = out + s * chart.u(k)
    return out


def hamiltonian_lift(frame: Frame, i: int) -> CoField:
    """u_i-field = X_i + sum_jk c_{ji}^k u_k d/du_j (1-based i)."""
    chart = frame.chart
    base = [chart.one() if k == i - 1 else chart.zero() for k in range(frame.n)]
    fiber = [poisson(frame, i, j + 1) for j in range(frame.n)]
    return CoField(frame, base, fiber)


def fiber_field(frame: Frame, j: int, coeff: Expr | int = 1) -> CoField:
    """coeff * d/du_j (1-based j)."""
    chart = frame.chart
    z = chart.zero()
    fiber = [chart.coerce(coeff) if k == j - 1 else z for k in range(frame.n)]
    return CoField(frame, [z] * frame.n, fiber)


def euler_field(frame: Frame) -> CoField:
    chart = frame.chart
    return CoField(frame, [chart.zero()] * frame.n, [chart.u(k) for k in range(frame.n)])


def char_field(frame: Frame) -> CoField:
    """Characteristic field u4 u2-field - u5 u1-field."""
    u4, u5 = frame.chart.u(3), frame.chart.u(4)
    return hamiltonian_lift(frame, 2).scale(u4) - hamiltonian_lift(frame, 1).scale(u5)


def theta_field(frame: Frame) -> CoField:
    """Rotation u4 d/du5 - u5 d/du4 of the (u4, u5) plane."""
    u4, u5 = frame.chart.u(3), frame.chart.u(4)
    return fiber_field(frame, 5, u4) - fiber_field(frame, 4, u5)


def calx_field(frame: Frame) -> CoField:
    u4, u5 = frame.chart.u(3), frame.chart.u(4)
    return (
        hamiltonian_lift(frame, 2).scale(u5)
        + hamiltonian_lift(frame, 1).scale(u4)
        - fiber_field(frame, 3, u4 * u4 + u5 * u5)
    )


def f_field(frame: Frame) -> CoField:
    u4, u5 = frame.chart.u(3), frame.chart.u(4)
    return hamiltonian_lift(frame, 3) + fiber_field(frame, 1, u4) + fiber_field(frame, 2, u5)


def y_field(frame: Frame, k: int) -> CoField:
    """Y_k for 4 <= k <= n-1, tangent to (D^2)^perp."""
    chart = frame.chart
    uk, uk1 = chart.u(k - 1), chart.u(k)
    out = hamiltonian_lift(frame, k).scale(uk1) - hamiltonian_lift(frame, k + 1).scale(uk)
    for i in range(1, 4):
        c = uk1 * poisson(frame, i, k) - uk * poisson(frame, i, k + 1)
        if not c.is_zero():
            out = out + fiber_field(frame, i, c)
    return out


def z_field(frame: Frame) -> CoField:
    """Z = u4 u4-field + u5 u5-field corrected in the d/du1..3 directions to be tangent."""
    chart = frame.chart
    u4, u5 = chart.u(3), chart.u(4)
    out = hamiltonian_lift(frame, 4).scale(u4) + hamiltonian_lift(frame, 5).scale(u5)
    for i in range(1, 4):
        c = u4 * poisson(frame, i, 4) + u5 * poisson(frame, i, 5)
        if not c.is_zero():
            out = out + fiber_field(frame, i, c)
    return out


def is_tangent(v: CoField) -> bool:
    """Whether V preserves u1 = u2 = u3 = 0."""
    return all(_on_d2perp(c).is_zero() for c in v.fiber[:3])


def transversal_basis(frame: Frame) -> list[CoField]:
    """The 2n-3 fields theta, X, d/du6..d/dun, F, Y_4..Y_{n-1}, Z, e, h spanning T(D^2)^perp."""
    n = frame.n
    out = [theta_field(frame), calx_field(frame)]
    out += [fiber_field(frame, j) for j in range(6, n + 1)]
    out.append(f_field(frame))
    out += [y_field(frame, k) for k in range(4, n)]
    out += [z_field(frame), euler_field(frame), char_field(frame)]
    return out


# -- points of (D^2)^perp -----------------------------------------------------------------

def fiber_point(frame: Frame, q: Point, u: Mapping[str, Fraction] | Sequence[Fraction]) -> dict[str, Fraction]:
    """A point lambda over q: u1 = u2 = u3 = 0 plus the given u4..un."""
    chart = frame.chart
    lam: dict[str, Fraction] = dict(q)
    for name in chart.fiber[:3]:
        lam[name] = Fraction(0)
    if isinstance(u, Mapping):
        for name in chart.fiber[3:]:
            lam[name] = Fraction(u.get(name, 0))
    else:
        values = list(u)
        if len(values) != frame.n - 3:
            raise DimensionMismatch(f"expected {frame.n - 3} fiber values u4..u{frame.n}")
        for name, v in zip(chart.fiber[3:], values):
            lam[name] = Fraction(v)
    if lam[chart.fiber[3]] == 0 and lam[chart.fiber[4]] == 0:
        raise BasePointOnD3perp("u4 = u5 = 0: the covector annihilates D^3")
    return lam


def random_fiber_point(frame: Frame, rng: random.Random, q: Point | None = None) -> dict[str, Fraction]:
    chart = frame.chart
    base = dict(q) if q is not None else chart.random_point(rng)
    while True:
        u = [random_rational(rng) for _ in range(frame.n - 3)]
        if u[0] or u[1]:
            return fiber_point(frame, base, u)


# -- J flag -------------------------------------------------------------------------------------

def j_spanning(frame: Frame, imax: int) -> list[list[CoField]]:
    """Spanning sets for J^(0), ..., J^(imax): iterated ad h of theta, X and d/du_j (j >= 6)."""
    h = char_field(frame)
    seeds = [theta_field(frame), calx_field(frame)] + [fiber_field(frame, j) for j in range(6, frame.n + 1)]
    fixed = [h, euler_field(frame)]
    levels = [fixed + seeds]
    newest = seeds
    for _ in range(imax):
        newest = [co_bracket(h, v) for v in newest]
        levels.append(levels[-1] + newest)
    return levels


def j_flag(frame: Frame, lam: Point | None = None, imax: int | None = None, seed: int = 0) -> FlagDims:
    """dim J^(i)(lambda) for i = 0..imax."""
    imax = frame.n - 3 if imax is None else imax
    if lam is None:
        lam = random_fiber_point(frame, random.Random(seed), frame.base_point)
    else:
        _check_lambda(frame, lam)
    levels = j_spanning(frame, imax)
    dims = []
    for fields in levels:
        rows = [v.at(lam) for v in fields]
        dims.append(linalg.rank(rows))
    return FlagDims(tuple(dims))


def _check_lambda(frame: Frame, lam: Point) -> None:
    chart = frame.chart
    for name in chart.fiber[:3]:
        if lam.get(name, 0) != 0:
            raise DimensionMismatch(f"lambda must lie on (D^2)^perp ({name} = 0)")
    if lam.get(chart.fiber[3], 0) == 0 and lam.get(chart.fiber[4], 0) == 0:
        raise BasePointOnD3perp("u4 = u5 = 0: the covector annihilates D^3")


def rd_membership(frame: Frame, lam: Point | None = None, seed: int = 0) -> bool:
    """Constant weight (n-3)^2 of the reduced Jacobi curve: dim J^(n-3) = 2n - 4."""
    n = frame.n
    return j_flag(frame, lam, n - 3, seed)[-1] == 2 * n - 4


# -- fiber forms -----------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberForm:
    """Homogeneous polynomial in fiber variables with coefficients in base symbols."""

    expr: Expr
    variables: tuple[str, ...]
    degree: int

    def __post_init__(self):
        e = self.expr
        idx = [e.chart.index[v] for v in self.variables]
        if e.is_zero():
            return
        dd = e.den.degrees()
        if any(dd[i] > 0 for i in idx):
            raise NotPolynomial(f"denominator of {e} involves {', '.join(self.variables)}")
        for exps, _ in e.num.terms():
            if sum(exps[i] for i in idx) != self.degree:
                raise NotHomogeneous(f"{e} is not homogeneous of degree {self.degree}")

    @classmethod
    def from_expr(cls, expr: Expr, variables: Iterable[str]) -> "FiberForm":
        variables = tuple(variables)
        deg = expr.degree_in(variables) if not expr.is_zero() else 0
        return cls(expr, variables, max(deg, 0))

    @property
    def chart(self) -> Chart:
        return self.expr.chart

    def is_zero(self) -> bool:
        return self.expr.is_zero()

    def at(self, q: Point) -> "FiberForm":
        """Coefficients evaluated at a base point."""
        names = set(self.variables)
        sub = {k: v for k, v in q.items() if k not in names and k in self.expr.symbols()}
        return FiberForm(self.expr.subs(sub), self.variables, self.degree)

    def evaluate(self, point: Mapping[str, Fraction | float]):
        return self.expr.eval(point)

    def coefficients(self) -> dict[tuple[int, ...], Expr]:
        """Coefficient (a base expression) of each monomial in the fiber variables."""
        e = self.expr
        chart = e.chart
        idx = [chart.index[v] for v in self.variables]
        groups: dict[tuple[int, ...], dict] = {}
        for exps, c in e.num.terms():
            key = tuple(exps[i] for i in idx)
            rest = list(exps)
            for i in idx:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        den = Expr(chart, e.den, chart._one_poly, raw=True)
        return {k: Expr(chart, chart.ctx.from_dict(v), chart._one_poly) / den for k, v in sorted(groups.items(), reverse=True)}

    def ratio_to(self, other: "FiberForm") -> Fraction | None:
        """The rational c with self = c * other, or None."""
        if other.is_zero():
            return Fraction(1) if self.is_zero() else None
        q = self.expr / other.expr
        return q.constant_value() if q.is_constant() else None

    def __str__(self) -> str:
        return str(self.expr)


def fiber_vars(frame: Frame, first: int = 4) -> tuple[str, ...]:
    return frame.chart.fiber[first - 1:]


# -- deficiency polynomial and the weight-jump locus -------------------------------------------

def alpha6(frame: Frame) -> Expr:
    """c_52^6 u4^2 - (c_42^6 + c_51^6) u4 u5 + c_41^6 u5^2 (symbolic in the base)."""
    if frame.n != 6:
        raise WrongDimension("alpha6 needs n = 6")
    chart = frame.chart
    u4, u5 = chart.u(3), chart.u(4)
    c = frame.c
    return c(5, 2, 6) * u4 * u4 - (c(4, 2, 6) + c(5, 1, 6)) * u4 * u5 + c(4, 1, 6) * u5 * u5


def deficiency_polynomial(frame: Frame, q: Point | None = None, seed: int = 0) -> FiberForm:
    """Polynomial on (D^2)^perp vanishing exactly where dim J^(n-3) < 2n - 4.

    n = 5 gives the constant 1, n = 6 the form alpha6, larger n the radical of
    the gcd of randomly projected maximal minors.  With ``q`` the coefficients
    are evaluated at q; otherwise they stay symbolic in the base.
    """
    n = frame.n
    chart = frame.chart
    vars_ = fiber_vars(frame)
    if n == 5:
        form = FiberForm(chart.one(), vars_, 0)
    elif n == 6:
        a = alpha6(frame)
        if a.is_zero():
            raise NotHypersurface("alpha6 vanishes identically: no lambda has constant weight")
        form = FiberForm.from_expr(a, vars_)
    else:
        p = minor_gcd_polynomial(frame, q, seed)
        form = FiberForm.from_expr(p, vars_)
    return form.at(q) if q is not None else form


def minor_gcd_polynomial(frame: Frame, q: Point | None = None, seed: int = 0, trials: int = 3) -> Expr:
    """Radical of gcd of maximal minors of the J^(n-3) spanning matrix on (D^2)^perp.

    Maximal minors are sampled through random rational projections (Cauchy-Binet);
    the gcd of a few such determinants is the gcd of all minors with high probability
    and is always a multiple of it.
    """
    n = frame.n
    chart = frame.chart
    rng = random.Random(seed)
    fields = j_spanning(frame, n - 3)[-1]
    target = 2 * n - 4
    rows = []
    for v in fields:
        row = []
        for c in v.base + v.fiber:
            c = _on_d2perp(c)
            if q is not None:
                sub = {k: val for k, val in q.items() if k in c.symbols()}
                c = c.subs(sub) if sub else c
            row.append(c)
        rows.append(row)
    g = None
    for _ in range(trials):
        left = [[Fraction(rng.randint(-5, 5)) for _ in rows] for _ in range(target)]
        right = [[Fraction(rng.randint(-5, 5)) for _ in range(target)] for _ in range(2 * n)]
        proj = []
        for lrow in left:
            combo = [chart.zero() for _ in range(2 * n)]
            for coef, row in zip(lrow, rows):
                if coef:
                    combo = [a + b * coef for a, b in zip(combo, row)]
            proj.append([sum((combo[m] * right[m][c] for m in range(2 * n)), chart.zero()) for c in range(target)])
        d = linalg.det(proj, chart.one())
        if d.is_zero():
            continue
        if not d.is_polynomial():
            d = Expr(chart, d.num, chart._one_poly)
        g = d.num if g is None else g.gcd(d.num)
    if g is None:
        raise NotHypersurface("every maximal minor vanishes: J^(n-3) is deficient everywhere")
    p = Expr(chart, g, chart._one_poly)
    if p.is_constant():
        return chart.one()
    return squarefree_radical(_fiber_part(p, fiber_vars(frame), _isotropic(chart)))


def _isotropic(chart: Chart) -> Expr:
    # on u4^2 + u5^2 = 0 the fields h and X become proportional, so every
    # minor of the spanning matrix picks up this factor
    u4, u5 = chart.u(3), chart.u(4)
    return u4 * u4 + u5 * u5


def _fiber_part(p: Expr, variables: Sequence[str], artifact: Expr | None = None) -> Expr:
    """Drop factors of p free of the fiber variables (and the spanning-set artifact)."""
    chart = p.chart
    idx = [chart.index[v] for v in variables]
    c, factors = p.num.factor()
    out = chart._one_poly
    for f, m in factors:
        if artifact is not None and (f / f.leading_coefficient()) == artifact.num:
            continue
        if any(f.degrees()[i] > 0 for i in idx):
            out = out * f**m
    return Expr(chart, out, chart._one_poly)


@dataclass(frozen=True)
class LocusReport:
    complex_nonempty: bool
    real_nonempty: bool | None
    witness: dict[str, Fraction] | None
    polynomial: str
    derivative: str


def weight_jump_locus(frame: Frame, q: Point | None = None, search: int = 4) -> LocusReport:
    """Points of (D^2)^perp(q) where P = 0 and h(P) != 0.

    Complex nonemptiness is exact: radical(P) does not divide h(P).  Real
    nonemptiness comes from a rational point search and is None when nothing
    is found.
    """
    if frame.n < 6:
        raise WrongDimension("the weight-jump locus is empty for n = 5")
    q = dict(frame.base_point) if q is None else dict(q)
    chart = frame.chart
    p_sym = deficiency_polynomial(frame)
    hp = _on_d2perp(char_field(frame).apply(p_sym.expr))
    sub_p = {k: v for k, v in q.items() if k in p_sym.expr.symbols()}
    p1 = p_sym.expr.subs(sub_p) if sub_p else p_sym.expr
    sub_h = {k: v for k, v in q.items() if k in hp.symbols()}
    p2 = hp.subs(sub_h) if sub_h else hp
    vars_ = fiber_vars(frame)
    if p1.is_constant() and not p1.is_zero():
        return LocusReport(False, False, None, str(p1), str(p2))
    if p2.is_zero():
        complex_nonempty = False
    elif p1.is_zero():
        # the whole fiber lies on P = 0; the locus is where h(P) does not vanish
        complex_nonempty = True
    else:
        complex_nonempty = not poly_divides(squarefree_radical(p1), p2)
    if not complex_nonempty:
        return LocusReport(False, False, None, str(p1), str(p2))
    witness = _rational_witness(p1, p2, vars_, q, search)
    return LocusReport(True, True if witness else None, witness, str(p1), str(p2))


def _rational_witness(p1: Expr, p2: Expr, vars_: Sequence[str], q: Point, search: int):
    chart = p1.chart
    grid = list(range(-search, search + 1))
    for free in vars_:
        others = [v for v in vars_ if v != free]
        for values in itertools.product(grid, repeat=len(others)):
            assign = dict(zip(others, (Fraction(v) for v in values)))
            uni = p1.subs(assign)
            if uni.is_zero() and not p1.is_zero():
                continue
            roots = [Fraction(v) for v in grid] if p1.is_zero() else _rational_roots(uni, free)
            for root in roots:
                point = dict(assign)
                point[free] = root
                if point[vars_[0]] == 0 and point[vars_[1]] == 0:
                    continue
                if p2.eval(point) != 0:
                    lam = dict(q)
                    for name in chart.fiber[:3]:
                        lam[name] = Fraction(0)
                    lam.update(point)
                    return lam
    return None


def _rational_roots(e: Expr, var: str) -> list[Fraction]:
    if e.is_constant():
        return []
    chart = e.chart
    i = chart.index[var]
    coeffs: dict[int, Fraction] = {}
    for exps, c in e.num.terms():
        if any(x for j, x in enumerate(exps) if j != i):
            return []
        coeffs[exps[i]] = Fraction(int(c.p), int(c.q))
    deg = max(coeffs)
    poly = flint.fmpq_poly([flint.fmpq(v.numerator, v.denominator) for v in (coeffs.get(k, Fraction(0)) for k in range(deg + 1))])
    roots = []
    _, factors = poly.factor()
    for f, _ in factors:
        if f.degree() == 1:
            c = f.coeffs()
            roots.append(Fraction(-int(c[0].p), int(c[0].q)) / Fraction(int(c[1].p), int(c[1].q)))
    return roots


# -- the n = 6 quadratic form and abnormal lifts -----------------------------------------------

def _annihilator(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return linalg.nullspace(vectors)


def n6_quadratic_form(frame: Frame, q: Point | None = None) -> dict[str, Fraction]:
    """Q(alpha X1 + beta X2) = p . [v, [v, [X1, X2]]](q) with p spanning (D^3)^perp(q).

    Returned as the coefficients of alpha^2, alpha*beta, beta^2.
    """
    if frame.n != 6:
        raise WrongDimension("the quadratic form is defined for n = 6")
    q = dict(frame.base_point) if q is None else dict(q)
    x1, x2, x3, x4, x5 = frame.fields[:5]
    ann = _annihilator([v.at(q) for v in (x1, x2, x3, x4, x5)])
    if len(ann) != 1:
        raise WrongDimension(f"(D^3)^perp(q) has dimension {len(ann)}, expected 1")
    p = ann[0]
    # the generator is normalized to p(X6) = 1 so the form is frame-determined
    p6 = sum(a * b for a, b in zip(p, frame.fields[5].at(q)))
    p = [c / p6 for c in p]

    def pair(v: VField) -> Fraction:
        return sum((a * b for a, b in zip(p, v.at(q))), Fraction(0))

    aa = pair(lie_bracket(x1, lie_bracket(x1, x3)))
    ab = pair(lie_bracket(x1, lie_bracket(x2, x3))) + pair(lie_bracket(x2, lie_bracket(x1, x3)))
    bb = pair(lie_bracket(x2, lie_bracket(x2, x3)))
    return {"alpha^2": aa, "alpha*beta": ab, "beta^2": bb}


def abnormal_lift(frame: Frame, q: Point | None = None) -> dict[str, Fraction]:
    """Covector over q annihilating T^(n-2)(q) for the X1 trajectory, in frame coordinates.

    Normalized so that the first nonzero of u4, u5 equals 1.
    """
    q = dict(frame.base_point) if q is None else dict(q)
    n = frame.n
    x1, x2 = frame.fields[:2]
    fields = [x1, x2]
    cur = x2
    for _ in range(n - 2):
        cur = lie_bracket(x1, cur)
        fields.append(cur)
    ann = _annihilator([v.at(q) for v in fields])
    if len(ann) != 1:
        raise GeometryError(f"the X1 trajectory has corank {len(ann)} at q, expected 1")
    p = ann[0]
    us = [sum((a * b for a, b in zip(p, f.at(q))), Fraction(0)) for f in frame.fields]
    lead = us[3] if us[3] != 0 else us[4]
    if lead == 0:
        raise BasePointOnD3perp("the abnormal covector annihilates D^3")
    us = [u / lead for u in us]
    chart = frame.chart
    lam = dict(q)
    lam.update({name: u for name, u in zip(chart.fiber, us)})
    return lam


# -- monotonicity -----------------------------------------------------------------------------------

def monotonicity_certificate(frame: Frame) -> Expr:
    """sigma([h, X], X) on (D^2)^perp."""
    h = char_field(frame)
    x = calx_field(frame)
    return _on_d2perp(symplectic(co_bracket(h, x), x))
