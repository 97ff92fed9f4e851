"""Exact rational functions over a chart of named symbols.

A :class:`Chart` fixes an ordered list of symbols (base coordinates, fiber
coordinates, auxiliary function symbols) together with derivation tables and
rewrite rules for the auxiliary symbols.  An :class:`Expr` is a reduced
fraction of two polynomials with rational coefficients in those symbols.

Polynomial arithmetic is delegated to ``python-flint`` (``fmpq_mpoly``); the
normal form, the auxiliary-symbol machinery, derivatives and serialization
live here.

Normal form of an :class:`Expr`:

* rewrite rules are applied to numerator and denominator until no term is
  divisible by a rule's left-hand side;
* for each quadratic rule ``a^2 -> r`` (``r`` free of ``a``) the denominator
  is made free of ``a`` by multiplying with its conjugate;
* the fraction is reduced by the polynomial gcd and the denominator is scaled
  to leading coefficient one in the graded lexicographic order.

With quadratic rules whose relations form a Groebner basis (all catalog
charts) this normal form is canonical, so ``==`` is semantic equality.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import flint

from ..errors import (
    ChartMismatch,
    DivisionByZeroFunction,
    InconsistentAssignment,
    MissingAssignment,
    ParseError,
    PoleAtPoint,
    UnknownSymbol,
    ZeroPolynomial,
)
from .grammar import parse_with

Scalar = Fraction
Number = Union[int, Fraction, flint.fmpq]

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def to_fmpq(value: Number | str) -> flint.fmpq:
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, int):
        return flint.fmpq(value)
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def to_fraction(value: Number) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


def format_rational(value: Number) -> str:
    q = to_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class AuxDecl:
    """Declaration of an auxiliary function symbol.

    ``derivatives`` maps base symbols to the text of the partial derivative;
    missing entries mean the derivative is zero.  ``rewrite`` is an optional
    pair ``(lhs, rhs)`` where ``lhs`` is a monomial in auxiliary symbols.
    ``sample`` is an optional pair ``(group, text)``: a rational
    parametrization in the parameter ``t``; symbols of one group share the
    parameter, which is how random points satisfying the rewrite rules are
    produced.
    """

    name: str
    derivatives: Mapping[str, str] = field(default_factory=dict)
    rewrite: tuple[str, str] | None = None
    sample: tuple[str, str] | None = None


def random_rational(rng: random.Random, span: int = 9, maxden: int = 5) -> Fraction:
    while True:
        q = Fraction(rng.randint(-span, span), rng.randint(1, maxden))
        if q:
            return q


class _Rule:
    __slots__ = ("lhs", "support", "rhs", "quadratic_var")

    def __init__(self, lhs: tuple[int, ...], rhs, quadratic_var: int | None):
        self.lhs = lhs
        self.support = tuple((i, e) for i, e in enumerate(lhs) if e)
        self.rhs = rhs
        self.quadratic_var = quadratic_var


class Chart:
    """Ordered symbol set with auxiliary-symbol calculus."""

    def __init__(
        self,
        base: Sequence[str],
        fiber: Sequence[str] | None = None,
        aux: Sequence[AuxDecl] = (),
    ):
        self.base = tuple(base)
        self.n = len(self.base)
        self.fiber = tuple(fiber) if fiber is not None else tuple(f"u{i + 1}" for i in range(self.n))
        self.aux_decls = tuple(aux)
        self.aux = tuple(a.name for a in self.aux_decls)
        self.names = self.base + self.fiber + self.aux
        seen: set[str] = set()
        for name in self.names:
            if not _IDENT.match(name):
                raise ParseError(f"invalid symbol name {name!r}")
            if name in seen:
                raise ParseError(f"duplicate symbol {name!r}")
            seen.add(name)
        self.index = {name: i for i, name in enumerate(self.names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "deglex")
        self._gens = self.ctx.gens() if self.names else ()
        self._zero_poly = self.ctx.from_dict({})
        self._one_poly = self._zero_poly + 1
        self._rules: list[_Rule] = []
        self._deriv: dict[int, list[tuple[int, Expr]]] = {}
        self._key = (
            self.names,
            tuple((a.name, tuple(sorted(a.derivatives.items())), a.rewrite, a.sample) for a in self.aux_decls),
        )
        self._build_aux()

    # -- construction -------------------------------------------------------

    def _build_aux(self) -> None:
        for decl in self.aux_decls:
            if decl.rewrite is None:
                continue
            lhs_text, rhs_text = decl.rewrite
            lhs = self.parse(lhs_text)
            terms = list(lhs.num.terms()) if lhs.is_polynomial() else []
            if len(terms) != 1 or terms[0][1] != 1:
                raise ParseError(f"rewrite lhs {lhs_text!r} must be a monic monomial")
            exps = terms[0][0]
            aux_start = self.n + len(self.fiber)
            if any(e for i, e in enumerate(exps) if i < aux_start) or not any(exps):
                raise ParseError(f"rewrite lhs {lhs_text!r} must be a monomial in auxiliary symbols")
            rhs = self.parse(rhs_text)
            if not rhs.is_polynomial():
                raise ParseError(f"rewrite rhs {rhs_text!r} must be a polynomial")
            support = [(i, e) for i, e in enumerate(exps) if e]
            quad = None
            if len(support) == 1 and support[0][1] == 2 and rhs.num.degrees()[support[0][0]] == 0:
                quad = support[0][0]
            if not _strictly_smaller(rhs.num, exps):
                raise ParseError(f"rewrite rule {lhs_text!r} -> {rhs_text!r} does not reduce the monomial order")
            self._rules.append(_Rule(tuple(exps), rhs.num, quad))
        for decl in self.aux_decls:
            a = self.index[decl.name]
            for sym, text in decl.derivatives.items():
                if sym not in self.base:
                    raise UnknownSymbol(f"derivative of {decl.name} taken w.r.t. non-base symbol {sym!r}")
                j = self.index[sym]
                self._deriv.setdefault(j, []).append((a, self.parse(text)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Chart) and (self is other or self._key == other._key)

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Chart(base={self.base}, fiber={self.fiber}, aux={self.aux})"

    def random_point(self, rng: random.Random, attempts: int = 50) -> dict[str, Fraction]:
        """Random rational values for base and auxiliary symbols (rules respected)."""
        tchart = _param_chart()
        for _ in range(attempts):
            point = {name: random_rational(rng) for name in self.base}
            groups: dict[str, Fraction] = {}
            try:
                for decl in self.aux_decls:
                    if decl.sample is None:
                        point[decl.name] = random_rational(rng)
                        continue
                    group, text = decl.sample
                    if group not in groups:
                        groups[group] = random_rational(rng, 7, 7)
                    point[decl.name] = tchart.parse(text).eval({"t": groups[group]})
                _check_rules_at(self, point)
            except (PoleAtPoint, InconsistentAssignment, DivisionByZeroFunction):
                continue
            return point
        raise InconsistentAssignment("could not sample a point satisfying the rewrite rules")

    @property
    def has_rules(self) -> bool:
        return bool(self._rules)

    def check_closed(self) -> list[str]:
        """Return the rules whose relation is not preserved by the derivations."""
        bad = []
        for rule in self._rules:
            rel = Expr(self, _monomial(self, rule.lhs) - rule.rhs, self._one_poly, raw=True)
            for sym in self.base:
                if not rel.diff(sym).is_zero():
                    bad.append(f"{self.format_monomial(rule.lhs)} (d/d{sym})")
        return bad

    # -- constructors -------------------------------------------------------

    def const(self, value: Number | str) -> "Expr":
        return Expr(self, self._zero_poly + to_fmpq(value), self._one_poly, raw=True)

    def zero(self) -> "Expr":
        return Expr(self, self._zero_poly, self._one_poly, raw=True)

    def one(self) -> "Expr":
        return Expr(self, self._one_poly, self._one_poly, raw=True)

    def sym(self, name: str) -> "Expr":
        try:
            i = self.index[name]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {name!r}") from None
        return Expr(self, self._gens[i], self._one_poly, raw=True)

    def x(self, i: int) -> "Expr":
        return self.sym(self.base[i])

    def u(self, i: int) -> "Expr":
        return self.sym(self.fiber[i])

    def parse(self, text: str) -> "Expr":
        return parse_with(text, self.const, self.sym)

    def coerce(self, value: "Expr | Number | str") -> "Expr":
        if isinstance(value, Expr):
            if value.chart != self:
                raise ChartMismatch("expression belongs to a different chart")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def from_poly(self, poly) -> "Expr":
        return Expr(self, poly, self._one_poly)

    # -- normal form ------------------------------------------------------------

    def reduce_poly(self, p):
        if not self._rules or p.is_zero():
            return p
        changed = True
        while changed:
            changed = False
            for rule in self._rules:
                degs = p.degrees()
                if any(degs[i] < e for i, e in rule.support):
                    continue
                keep: dict = {}
                quot: dict = {}
                for exps, c in p.terms():
                    if all(exps[i] >= e for i, e in rule.support):
                        q = list(exps)
                        for i, e in rule.support:
                            q[i] -= e
                        quot[tuple(q)] = c
                    else:
                        keep[exps] = c
                if quot:
                    p = self.ctx.from_dict(keep) + self.ctx.from_dict(quot) * rule.rhs
                    changed = True
        return p

    def normalize(self, num, den):
        if den.is_zero():
            raise DivisionByZeroFunction("denominator is the zero function")
        if self._rules:
            num = self.reduce_poly(num)
            den = self.reduce_poly(den)
            for rule in self._rules:
                a = rule.quadratic_var
                if a is None or den.degrees()[a] == 0:
                    continue
                d1 = den.derivative(a)
                d0 = den - d1 * self._gens[a]
                conj = d0 - d1 * self._gens[a]
                num = self.reduce_poly(num * conj)
                den = self.reduce_poly(den * conj)
            if den.is_zero():
                raise DivisionByZeroFunction("denominator reduces to zero modulo the rewrite rules")
        if num.is_zero():
            return self._zero_poly, self._one_poly
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_constant():
                num = num / g
                den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return num, den

    # -- serialization ------------------------------------------------------

    def format_monomial(self, exps: Sequence[int]) -> str:
        parts = []
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(self.names[i])
            elif e > 1:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts)

    def format_poly(self, p) -> str:
        if p.is_zero():
            return "0"
        out: list[str] = []
        for exps, c in p.terms():
            q = to_fraction(c)
            mono = self.format_monomial(exps)
            neg = q < 0
            mag = -q if neg else q
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)


_PARAM_CHART: list[Chart] = []


def _param_chart() -> Chart:
    if not _PARAM_CHART:
        _PARAM_CHART.append(Chart(["t"], fiber=()))
    return _PARAM_CHART[0]


def _monomial(chart: Chart, exps: Sequence[int]):
    return chart.ctx.from_dict({tuple(exps): 1})


def _grlex_key(exps: Sequence[int]) -> tuple:
    return (sum(exps), tuple(exps))


def _strictly_smaller(p, exps: Sequence[int]) -> bool:
    bound = _grlex_key(exps)
    return all(_grlex_key(e) < bound for e, _ in p.terms())


def _reduced(chart: Chart, num, den, g) -> "Expr":
    """Build num/den when any common factor must divide g (None: unknown, 1: none)."""
    if num.is_zero():
        return Expr(chart, chart._zero_poly, chart._one_poly, raw=True)
    if g is None:
        g = num.gcd(den)
    elif g != 1:
        g = num.gcd(g)
    if g != 1 and not g.is_constant():
        num, den = num / g, den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return Expr(chart, num, den, raw=True)


class Expr:
    """Reduced rational function in the symbols of a chart (immutable)."""

    __slots__ = ("chart", "num", "den", "_hash")

    def __init__(self, chart: Chart, num, den, raw: bool = False):
        if not raw:
            num, den = chart.normalize(num, den)
        self.chart = chart
        self.num = num
        self.den = den
        self._hash = None

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not constant")
        if self.num.is_zero():
            return Fraction(0)
        return to_fraction(self.num.leading_coefficient()) / to_fraction(self.den.leading_coefficient())

    def symbols(self) -> set[str]:
        names = self.chart.names
        out = set()
        for p in (self.num, self.den):
            for i, d in enumerate(p.degrees()):
                if d > 0:
                    out.add(names[i])
        return out

    def degree_in(self, names: Iterable[str]) -> int:
        """Total degree of the numerator in the given symbols (denominator must be free of them)."""
        idx = [self.chart.index[s] for s in names]
        best = -1
        for exps, _ in self.num.terms():
            best = max(best, sum(exps[i] for i in idx))
        return best

    def truncate_in(self, names: Iterable[str], degree: int) -> "Expr":
        """Drop numerator terms of total degree > degree in the given symbols.

        Only meaningful when the denominator is free of them; otherwise the
        expression is returned unchanged.
        """
        chart = self.chart
        idx = [chart.index[s] for s in names]
        dd = self.den.degrees()
        if any(dd[i] > 0 for i in idx):
            return self
        nd = self.num.degrees()
        if sum(max(nd[i], 0) for i in idx) <= degree:
            return self
        keep = {e: c for e, c in self.num.terms() if sum(e[i] for i in idx) <= degree}
        if len(keep) == len(self.num):
            return self
        return _reduced(chart, chart.ctx.from_dict(keep), self.den, None) if keep else chart.zero()

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.chart is not self.chart and other.chart != self.chart:
                raise ChartMismatch("expressions belong to different charts")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.chart.const(other)
        return NotImplemented

    def __add__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den.is_constant() and o.den.is_constant():
            return Expr(self.chart, self.num + o.num, self.chart._one_poly, raw=True)
        if self.chart._rules:
            return Expr(self.chart, self.num * o.den + o.num * self.den, self.den * o.den)
        # only the gcd of the denominators can survive in the sum
        g = self.den.gcd(o.den)
        if g.is_constant():
            return _reduced(self.chart, self.num * o.den + o.num * self.den, self.den * o.den, None)
        d1, d2 = self.den / g, o.den / g
        return _reduced(self.chart, self.num * d2 + o.num * d1, self.den * d2, g)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.chart, -self.num, self.den, raw=True)

    def __sub__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return self.chart.zero()
        if o.is_constant():
            c = o.num.leading_coefficient()
            return Expr(self.chart, self.num * c, self.den, raw=True)
        if self.is_constant():
            c = self.num.leading_coefficient()
            return Expr(self.chart, o.num * c, o.den, raw=True)
        if self.den.is_constant() and o.den.is_constant():
            num = self.num * o.num
            if self.chart._rules:
                num = self.chart.reduce_poly(num)
            return Expr(self.chart, num, self.chart._one_poly, raw=True)
        if self.chart._rules:
            return Expr(self.chart, self.num * o.num, self.den * o.den)
        a, b, c, d = self.num, self.den, o.num, o.den
        if not d.is_constant():
            g = a.gcd(d)
            if not g.is_constant():
                a, d = a / g, d / g
        if not b.is_constant():
            g = c.gcd(b)
            if not g.is_constant():
                c, b = c / g, b / g
        return _reduced(self.chart, a * c, b * d, 1)

    __rmul__ = __mul__

    def inverse(self) -> "Expr":
        if self.num.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        return Expr(self.chart, self.den, self.num)

    def __truediv__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise DivisionByZeroFunction("division by the zero function")
        if o.is_constant():
            c = o.num.leading_coefficient()
            return Expr(self.chart, self.num / c, self.den, raw=True)
        return Expr(self.chart, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "Expr":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int) -> "Expr":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.chart.one()
        num = self.num**k
        den = self.den**k
        if self.chart._rules:
            return Expr(self.chart, num, den)
        return Expr(self.chart, num, den, raw=True)

    # -- equality -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, flint.fmpq)):
            other = self.chart.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        if other.chart != self.chart:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart._key, str(self)))
        return self._hash

    # -- calculus -----------------------------------------------------------

    def _dpoly_base(self, p, j: int) -> "Expr":
        chart = self.chart
        res = Expr(chart, p.derivative(j), chart._one_poly, raw=True)
        table = chart._deriv.get(j)
        if table:
            degs = p.degrees()
            for a, da in table:
                if degs[a] > 0:
                    res = res + Expr(chart, p.derivative(a), chart._one_poly, raw=True) * da
        return res

    def derivation(self, coeffs: Sequence[tuple[str, "Expr"]]) -> "Expr":
        """Apply sum c * d/d(sym) with one quotient rule for the whole sum."""
        chart = self.chart
        if self.num.is_zero():
            return self

        def dpoly(p) -> "Expr":
            out = chart.zero()
            degs = p.degrees()
            for sym, c in coeffs:
                j = chart.index[sym]
                if c.is_zero():
                    continue
                if j < chart.n:
                    relevant = degs[j] > 0 or any(degs[a] > 0 for a, _ in chart._deriv.get(j, ()))
                    if relevant:
                        out = out + self._dpoly_base(p, j) * c
                elif degs[j] > 0:
                    out = out + Expr(chart, p.derivative(j), chart._one_poly, raw=True) * c
            return out

        dnum = dpoly(self.num)
        if self.den.is_constant():
            return dnum / Expr(chart, self.den, chart._one_poly, raw=True)
        dden = dpoly(self.den)
        num = Expr(chart, self.num, chart._one_poly, raw=True)
        den = Expr(chart, self.den, chart._one_poly, raw=True)
        return (dnum * den - num * dden) / (den * den)

    def diff(self, sym: str) -> "Expr":
        chart = self.chart
        try:
            j = chart.index[sym]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol {sym!r}") from None
        if j >= chart.n + len(chart.fiber):
            if any(rule.lhs[j] for rule in chart._rules):
                raise UnknownSymbol(
                    f"{sym!r} is constrained by a rewrite rule; differentiate with respect to base symbols"
                )
        if self.num.is_zero():
            return self
        if j < chart.n:
            dnum = self._dpoly_base(self.num, j)
            if self.den.is_constant():
                return dnum
            dden = self._dpoly_base(self.den, j)
        else:
            dnum = Expr(chart, self.num.derivative(j), chart._one_poly, raw=True)
            if self.den.is_constant():
                return dnum
            dden = Expr(chart, self.den.derivative(j), chart._one_poly, raw=True)
        num = Expr(chart, self.num, chart._one_poly, raw=True)
        den = Expr(chart, self.den, chart._one_poly, raw=True)
        return (dnum * den - num * dden) / (den * den)

    def depends_on_base(self) -> bool:
        chart = self.chart
        limit = chart.n
        aux_start = chart.n + len(chart.fiber)
        for p in (self.num, self.den):
            degs = p.degrees()
            if any(d > 0 for d in degs[:limit]) or any(d > 0 for d in degs[aux_start:]):
                return True
        return False

    # -- substitution and evaluation ----------------------------------------

    def subs(self, mapping: Mapping[str, "Expr | Number"]) -> "Expr":
        """Substitute symbols by expressions of the same chart."""
        chart = self.chart
        if not mapping:
            return self
        values = {}
        for name, v in mapping.items():
            if name not in chart.index:
                raise UnknownSymbol(f"unknown symbol {name!r}")
            values[name] = chart.coerce(v)
        if all(v.is_constant() for v in values.values()):
            consts = {k: v.constant_value() for k, v in values.items()}
            num = _subs_const(self.num, chart, consts)
            den = _subs_const(self.den, chart, consts)
            if den.is_zero():
                raise PoleAtPoint("denominator vanishes after substitution")
            return Expr(chart, num, den)
        if all(v.is_polynomial() for v in values.values()):
            gens = list(chart._gens)
            for name, v in values.items():
                gens[chart.index[name]] = v.num / v.den.leading_coefficient()
            num = self.num.compose(*gens) if chart.names else self.num
            den = self.den.compose(*gens) if chart.names else self.den
            if den.is_zero():
                raise PoleAtPoint("denominator vanishes after substitution")
            return Expr(chart, num, den)
        return _subs_general(self.num, chart, values) / _subs_general(self.den, chart, values)

    def eval(self, assignment: Mapping[str, Number | float | str]):
        """Evaluate at a point; exact when every needed value is rational."""
        chart = self.chart
        needed = self.symbols()
        missing = needed - set(assignment)
        if missing:
            raise MissingAssignment(f"no value for {sorted(missing)}")
        exact = all(not isinstance(assignment[s], float) for s in needed)
        if exact:
            vals = {s: to_fmpq(assignment[s]) for s in needed}
            _check_rules_at(chart, assignment)
            num = _eval_exact(self.num, chart, vals)
            den = _eval_exact(self.den, chart, vals)
            if den == 0:
                raise PoleAtPoint(f"pole of {self} at {dict(assignment)}")
            return to_fraction(num) / to_fraction(den)
        fvals = {s: float(assignment[s]) if not isinstance(assignment[s], str) else float(Fraction(assignment[s]))
                 for s in needed}
        num = _eval_float(self.num, chart, fvals)
        den = _eval_float(self.den, chart, fvals)
        if den == 0.0:
            raise PoleAtPoint(f"pole of {self} at {dict(assignment)}")
        return num / den

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        num = self.chart.format_poly(self.num)
        if self.den.is_constant():
            return num
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({self.chart.format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"Expr({self})"


def _subs_const(p, chart: Chart, consts: Mapping[str, Fraction]):
    out = p
    for name, value in consts.items():
        if out.degrees()[chart.index[name]] > 0:
            out = out.subs({name: to_fmpq(value)})
    return out


def _subs_general(p, chart: Chart, values: Mapping[str, Expr]) -> Expr:
    acc = chart.zero()
    cache: dict[tuple[str, int], Expr] = {}
    for exps, c in p.terms():
        term = chart.const(c)
        for i, e in enumerate(exps):
            if not e:
                continue
            name = chart.names[i]
            if name in values:
                key = (name, e)
                if key not in cache:
                    cache[key] = values[name] ** e
                term = term * cache[key]
            else:
                term = term * chart.sym(name) ** e
        acc = acc + term
    return acc


def _eval_exact(p, chart: Chart, vals: Mapping[str, flint.fmpq]):
    if p.is_zero():
        return flint.fmpq(0)
    args = [vals.get(name, flint.fmpq(0)) for name in chart.names]
    return p(*args) if chart.names else p.leading_coefficient()


def _eval_float(p, chart: Chart, vals: Mapping[str, float]) -> float:
    total = math.fsum(
        float(to_fraction(c)) * math.prod(vals[chart.names[i]] ** e for i, e in enumerate(exps) if e)
        for exps, c in p.terms()
    )
    return total


def _check_rules_at(chart: Chart, assignment: Mapping[str, Number | float | str]) -> None:
    for rule in chart._rules:
        names = [chart.names[i] for i, _ in rule.support]
        rhs_syms = [chart.names[i] for i, d in enumerate(rule.rhs.degrees()) if d > 0]
        if not all(s in assignment for s in names + rhs_syms):
            continue
        vals = {s: to_fmpq(assignment[s]) for s in names + rhs_syms}
        lhs = math.prod((vals[chart.names[i]] ** e for i, e in rule.support), start=flint.fmpq(1))
        rhs = _eval_exact(rule.rhs, chart, vals)
        if lhs != rhs:
            raise InconsistentAssignment(
                f"point violates rewrite rule {chart.format_monomial(rule.lhs)} -> {chart.format_poly(rule.rhs)}"
            )


def squarefree_radical(p: Expr) -> Expr:
    """Product of the distinct irreducible factors of a polynomial, content-normalized."""
    if not p.is_polynomial():
        raise ValueError("radical of a non-polynomial expression")
    if p.is_zero():
        raise ZeroPolynomial("radical of the zero polynomial")
    _, factors = p.num.factor_squarefree()
    chart = p.chart
    out = chart._one_poly
    for f, _ in factors:
        out = out * f
    if not out.is_zero() and not out.is_constant():
        out = out / out.leading_coefficient()
    return Expr(chart, out, chart._one_poly, raw=True)


def poly_divides(a: Expr, b: Expr) -> bool:
    """Whether polynomial ``a`` divides polynomial ``b`` over the rationals."""
    if not (a.is_polynomial() and b.is_polynomial()):
        raise ValueError("divisibility is defined for polynomials")
    if a.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    _, r = divmod(b.num, a.num)
    return r.is_zero()
