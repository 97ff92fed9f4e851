"""Fundamental form, projective Ricci curvature and their companions for (2,3,5) distributions.

Pipeline: pick a vertical field eps1 = 6 (g4 d/du4 + g5 d/du5) with
g4 u5 - g5 u4 constant along characteristic curves, bracket it four times
with the characteristic field h and solve

    (ad h)^4 eps1 = A0 eps1 + B1 (ad h) eps1 + A1 (ad h)^2 eps1  mod span(h, e)

over the rational functions on (D^2)^perp.  Then B1 = h(A1) and

    35 A = A0 + 9/100 A1^2 - 3/10 h(h(A1)).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import flint

from .cotangent import (
    CoField,
    FiberForm,
    _on_d2perp,
    ad_sequence,
    char_field,
    euler_field,
    fiber_field,
    random_fiber_point,
)
from .errors import (
    InconsistentSystem,
    InvalidStyle,
    NonzeroResidual,
    PoleAtPoint,
    SingularBasisChange,
    VanishingFundamentalForm,
    WrongDimension,
)
from .manifold import DistributionSpec, Frame, VField, build_adapted_frame
from .symbalg import linalg
from .symbalg.expr import Expr, format_rational, to_fraction

STYLES = ("inv_u5", "inv_u4", "polar_minus", "polar_plus", "custom")

TAGS = ("zero", "plus-square-definite", "minus-square-definite", "square-indefinite", "other")

RHO_SCALE = 4 * math.sqrt(35) / 9


@dataclass(frozen=True)
class Epsilon1Choice:
    style: str
    gamma4: Expr
    gamma5: Expr
    constant: Expr
    field: CoField


def choose_eps1(frame: Frame, style: str = "inv_u5", gamma: tuple[Any, Any] | None = None) -> Epsilon1Choice:
    """eps1 = 6 (gamma4 d/du4 + gamma5 d/du5) for one of the standard styles.

    ``custom`` takes ``gamma = (gamma4, gamma5)`` (expressions or strings) and
    is accepted only when gamma4 u5 - gamma5 u4 is a first integral of h.
    """
    if frame.n != 5 and style != "custom":
        pass
    chart = frame.chart
    u4, u5 = chart.u(3), chart.u(4)
    if style == "inv_u5":
        g4, g5 = 1 / u5, chart.zero()
    elif style == "inv_u4":
        g4, g5 = chart.zero(), 1 / u4
    elif style == "polar_minus":
        r2 = u4 * u4 + u5 * u5
        g4, g5 = u5 / r2, -u4 / r2
    elif style == "polar_plus":
        d = u5 * u5 - u4 * u4
        g4, g5 = u5 / d, u4 / d
    elif style == "custom":
        if gamma is None:
            raise InvalidStyle("custom style needs gamma = (gamma4, gamma5)")
        g4, g5 = chart.coerce(gamma[0]), chart.coerce(gamma[1])
    else:
        raise InvalidStyle(f"unknown eps1 style {style!r}; choose from {', '.join(STYLES)}")
    const = g4 * u5 - g5 * u4
    if const.is_zero():
        raise InvalidStyle("gamma4 u5 - gamma5 u4 vanishes identically")
    if style == "custom" and not _on_d2perp(char_field(frame).apply(const)).is_zero():
        raise InvalidStyle(f"gamma4 u5 - gamma5 u4 = {const} is not constant along characteristic curves")
    eps = fiber_field(frame, 4, g4 * 6) + fiber_field(frame, 5, g5 * 6)
    return Epsilon1Choice(style, g4, g5, const, eps)


@dataclass(frozen=True)
class Decomposition:
    a0: Expr
    b1: Expr
    a1: Expr
    c_h: Expr
    c_e: Expr
    residual: Expr


def solve_A0A1(frame: Frame, eps: Epsilon1Choice | CoField) -> Decomposition:
    field_ = eps.field if isinstance(eps, Epsilon1Choice) else eps
    h = char_field(frame)
    seq = [v.restrict() for v in ad_sequence(h, field_, 4, on_d2perp=True)]
    cols = [seq[0], seq[1], seq[2], h.restrict(), euler_field(frame).restrict()]
    rows = [[c.base[m] for c in cols] for m in range(frame.n)]
    rows += [[c.fiber[m] for c in cols] for m in range(frame.n)]
    rhs = list(seq[4].base) + list(seq[4].fiber)
    try:
        a0, b1, a1, ch, ce = linalg.solve(rows, rhs)
    except InconsistentSystem as exc:
        raise InconsistentSystem(
            f"(ad h)^4 eps1 is not in span(eps1, ad h eps1, (ad h)^2 eps1, h, e): {exc}"
        ) from exc
    residual = b1 - _on_d2perp(h.apply(a1))
    return Decomposition(a0, b1, a1, ch, ce, residual)


def fundamental_form(frame: Frame, dec: Decomposition) -> FiberForm:
    h = char_field(frame)
    ha1 = _on_d2perp(h.apply(dec.a1))
    hha1 = _on_d2perp(h.apply(ha1))
    a = (dec.a0 + dec.a1 * dec.a1 * Fraction(9, 100) - hha1 * Fraction(3, 10)) / 35
    return FiberForm(a, frame.chart.fiber[3:5], 4)


def second_fundamental_form(frame: Frame, a: FiberForm, a1: Expr) -> FiberForm:
    """C = -2/15 A1 A^2 - 1/6 h(h(A)) A + 3/16 h(A)^2, homogeneous of degree 10."""
    h = char_field(frame)
    e = a.expr
    ha = _on_d2perp(h.apply(e))
    hha = _on_d2perp(h.apply(ha))
    c = a1 * e * e * Fraction(-2, 15) - hha * e * Fraction(1, 6) + ha * ha * Fraction(3, 16)
    return FiberForm(c, a.variables, 10)


def classify_form(a: FiberForm, q: Mapping[str, Fraction] | None = None) -> str:
    """Shape of a binary quartic: zero, +-(definite quadratic)^2, (indefinite)^2 or other."""
    form = a.at(q) if q is not None else a
    e = form.expr
    if e.is_zero():
        return "zero"
    if e.symbols() - set(form.variables):
        raise WrongDimension(f"classification needs numeric coefficients, got {e}")
    content, factors = e.num.factor_squarefree()
    if any(m % 2 for _, m in factors):
        return "other"
    chart = e.chart
    qpoly = chart._one_poly
    for f, m in factors:
        qpoly = qpoly * f ** (m // 2)
    if qpoly.total_degree() != 2:
        return "other"
    i4, i5 = (chart.index[v] for v in form.variables)
    coef = {(0, 0): Fraction(0)}
    for exps, c in qpoly.terms():
        coef[(exps[i4], exps[i5])] = to_fraction(c)
    aa, bb, cc = coef.get((2, 0), 0), coef.get((1, 1), 0), coef.get((0, 2), 0)
    disc = bb * bb - 4 * aa * cc
    scale = to_fraction(content) * to_fraction(e.den.leading_coefficient()) ** -1
    if disc < 0:
        return "plus-square-definite" if scale > 0 else "minus-square-definite"
    if disc > 0:
        return "square-indefinite"
    return "other"


@dataclass
class InvariantReport:
    name: str
    style: str
    a0: Expr
    a1: Expr
    residual: Expr
    form: FiberForm
    second_form: FiberForm
    tag: str
    rho_samples: list[tuple[dict[str, Fraction], float]] = field(default_factory=list)

    def rho(self, lam: Mapping[str, Fraction | float]) -> float:
        return rho_value(self.form, self.second_form, lam)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "eps1": self.style,
            "A0": str(self.a0),
            "A1": str(self.a1),
            "residual": str(self.residual),
            "A": str(self.form),
            "C": str(self.second_form),
            "classification": self.tag,
            "rho": [
                {"point": {k: format_rational(v) for k, v in p.items()}, "value": float(f"{v:.15g}")}
                for p, v in self.rho_samples
            ],
        }


def rho_value(a: FiberForm, c: FiberForm, lam: Mapping[str, Fraction | float]) -> float:
    av = a.expr.eval(lam)
    if av == 0:
        raise VanishingFundamentalForm("A vanishes at this covector; rho_D is undefined")
    cv = c.expr.eval(lam)
    return float(cv) / abs(float(av)) ** 2.5


def run_pipeline(
    frame: Frame,
    style: str = "inv_u5",
    gamma: tuple[Any, Any] | None = None,
    name: str = "",
    samples: Sequence[Mapping[str, Fraction]] = (),
    classify_at: Mapping[str, Fraction] | None = None,
) -> InvariantReport:
    """Full n = 5 pipeline: A0, A1, residual, A, C, classification and rho samples."""
    if frame.n != 5:
        raise WrongDimension("the invariant pipeline is implemented for n = 5")
    eps = choose_eps1(frame, style, gamma)
    dec = solve_A0A1(frame, eps)
    if not dec.residual.is_zero():
        raise NonzeroResidual(f"B1 - h(A1) = {dec.residual}")
    a = fundamental_form(frame, dec)
    c = second_fundamental_form(frame, a, dec.a1)
    at = classify_at if classify_at is not None else frame.base_point
    try:
        tag = classify_form(a, at)
    except WrongDimension:
        tag = "other"
    report = InvariantReport(name, style, dec.a0, dec.a1, dec.residual, a, c, tag)
    for lam in samples:
        try:
            report.rho_samples.append((dict(lam), report.rho(lam)))
        except (VanishingFundamentalForm, PoleAtPoint):
            continue
    return report


def default_samples(frame: Frame, count: int = 5, seed: int = 0) -> list[dict[str, Fraction]]:
    """Rational covectors over the base point (random base points if none)."""
    rng = random.Random(seed)
    base = frame.base_point
    out = [
        _lam(frame, base, 1, 0),
        _lam(frame, base, 0, 1),
    ]
    while len(out) < count:
        out.append(random_fiber_point(frame, rng, base))
    return out[:count]


def _lam(frame: Frame, base, u4, u5) -> dict[str, Fraction]:
    chart = frame.chart
    lam = dict(base or {})
    lam.update({chart.fiber[0]: Fraction(0), chart.fiber[1]: Fraction(0), chart.fiber[2]: Fraction(0)})
    lam[chart.fiber[3]] = Fraction(u4)
    lam[chart.fiber[4]] = Fraction(u5)
    return lam


def invariants(d: DistributionSpec, style: str = "inv_u5", samples: int = 5, seed: int = 0) -> InvariantReport:
    frame = build_adapted_frame(d)
    return run_pipeline(frame, style, name=d.name, samples=default_samples(frame, samples, seed))


def tangential_form(a: FiberForm, q: Mapping[str, Fraction], alpha, beta):
    """A_q(alpha X1 + beta X2) = A(q; u4 = beta, u5 = -alpha)."""
    point = dict(q)
    point[a.variables[0]] = beta
    point[a.variables[1]] = -alpha if not isinstance(alpha, Fraction) else -alpha
    sub = {k: v for k, v in point.items() if k in a.expr.symbols()}
    return a.expr.eval(sub) if sub or not a.expr.is_constant() else a.expr.constant_value()


def projective_ricci(report: InvariantReport, points: Sequence[Mapping[str, Fraction]]) -> list[float]:
    return [report.rho(p) for p in points]


# -- covariance -------------------------------------------------------------------------

@dataclass(frozen=True)
class CovarianceResult:
    holds: bool
    delta: Expr
    transformed: FiberForm
    original: FiberForm


def covariance_check(d: DistributionSpec, nu: Sequence[Sequence[Any]], style: str = "inv_u5") -> CovarianceResult:
    """Compare A for (X1, X2) and for nu (X1, X2) after transporting fiber coordinates."""
    chart = d.chart
    m = [[chart.coerce(v) for v in row] for row in nu]
    delta = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if delta.is_zero():
        raise SingularBasisChange("det nu vanishes identically")
    frame = build_adapted_frame(d)
    base = run_pipeline(frame, style).form
    y1 = d.x1.scale(m[0][0]) + d.x2.scale(m[0][1])
    y2 = d.x1.scale(m[1][0]) + d.x2.scale(m[1][1])
    other = d.with_basis(y1, y2)
    frame2 = build_adapted_frame(other)
    new = run_pipeline(frame2, style).form
    # u~_i = p(X~_i) = sum_k T_ik u_k with X~_i = sum_k T_ik X_k
    us = [chart.u(k) for k in range(5)]
    subs = {}
    for i in (3, 4):
        t = frame.coords_of(frame2.fields[i])
        subs[chart.fiber[i]] = sum((t[k] * us[k] for k in (3, 4)), chart.zero())
    moved = new.expr.subs(subs)
    holds = moved == base.expr * delta**8
    return CovarianceResult(holds, delta, new, base)
