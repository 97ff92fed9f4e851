"""Canonical moving frame of a rank-one curve of constant weight in L(R^4).

Vectors of W = R^2 + R^2 are lists of four series (x1, x2, y1, y2).  The first
frame vector is e1 = c e1t with e1t rational and c^2 = ``scale2``, so every
stored series stays exact; the dual vectors are f_i = f_it / c.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from fractions import Fraction
from typing import Sequence

from ..errors import DimensionMismatch, NotDivisible, OrderUnderflow, RankTooHigh, SignViolation
from ..symbalg import linalg
from ..symbalg.series import Series1, Series2, mat_inv, mat_mul
from .curves import MatCurve, curve_invariants

Vec = list[Series1]


def sbar(a: Sequence, b: Sequence):
    """sigma((x, y), (x', y')) = y.x' - x.y' for vectors of series or numbers."""
    m = len(a) // 2
    acc = a[m] * b[0] - a[0] * b[m]
    for i in range(1, m):
        acc = acc + a[m + i] * b[i] - a[i] * b[m + i]
    return acc


def vdiff(v: Vec) -> Vec:
    return [c.diff() for c in v]


def vscale(v: Vec, c) -> Vec:
    return [x * c for x in v]


def vadd(*vs: Vec) -> Vec:
    out = list(vs[0])
    for v in vs[1:]:
        out = [a + b for a, b in zip(out, v)]
    return out


def _graph_vector(curve: MatCurve, x: Sequence[Series1]) -> Vec:
    rows = curve.rows()
    y = [sum((rows[i][j] * x[j] for j in range(1, len(x))), rows[i][0] * x[0]) for i in range(len(x))]
    return list(x) + y


def _increment_inverse_free_term(curve: MatCurve) -> list[list[Series1]]:
    """Free term in s of (S_{tau+s} - S_tau)^-1, as series in tau."""
    names = ("tau", "s")
    inc = []
    for row in curve.entries:
        line = []
        for e in row:
            terms: dict[tuple[int, int], Fraction] = {}
            for k, c in e.terms.items():
                # (tau + s)^k - tau^k
                for a in range(k):
                    b = k - a
                    key = (a, b)
                    terms[key] = terms.get(key, 0) + c * comb(k, b)
            line.append(Series2(terms, e.prec, names))
        inc.append(line)
    q = mat_inv(inc)
    return [[c.coefficient_series(1, 0) for c in row] for row in q]


@dataclass(frozen=True)
class CanonicalFrame:
    """e1 = c e1t, e2 = c e2t, f_i = f_it / c with c^2 = scale2."""

    e1t: Vec
    e2t: Vec
    f1t: Vec
    f2t: Vec
    scale2: Fraction
    rho: Series1
    density: Series1

    def e_at_zero(self) -> tuple[list[Fraction], list[Fraction]]:
        return [c.coeff(0) for c in self.e1t], [c.coeff(0) for c in self.e2t]


def canonical_basis_m2(curve: MatCurve, order: int | None = None) -> CanonicalFrame:
    """Canonical frame from the skew complement of D^(1)Lambda and sigma(e1'', e1') = 36."""
    if curve.m != 2 or not curve.lagrangian:
        raise DimensionMismatch("the canonical frame is implemented for Lagrangian curves with m = 2")
    if order is not None:
        curve = curve.truncate(order)
    vel = curve.derivative().rows()
    v0 = [[e.coeff(0) for e in row] for row in vel]
    if linalg.rank(v0) > 1:
        raise RankTooHigh("velocity at 0 has rank 2")
    if v0[0][0] + v0[1][1] < 0:
        raise SignViolation("velocity at 0 is negative semidefinite; reverse the curve")
    if v0[0][0] == 0 and v0[1][1] == 0:
        raise NotDivisible("velocity vanishes at 0; the weight is not constant there")
    # kernel of the rank-one velocity
    if v0[0][0] != 0:
        x = [-vel[0][1], vel[0][0]]
    else:
        x = [vel[1][1], -vel[0][1]]
    et = _graph_vector(curve, x)
    d1 = vdiff(et)
    s = sbar(vdiff(d1), d1)
    s0 = s.coeff(0)
    if s0 <= 0:
        raise SignViolation("sigma(e'', e') <= 0 at 0")
    lam = (s.log() * Fraction(-1, 2)).exp()
    e1t = vscale(et, lam)
    first = next((c.coeff(0) for c in e1t if c.coeff(0) != 0), None)
    if first is not None and first < 0:
        e1t = vscale(e1t, -1)
    scale2 = Fraction(36) / s0
    e2t = vscale(vdiff(e1t), Fraction(1, 3))

    q0 = _increment_inverse_free_term(curve)
    rows = curve.rows()
    big = []
    for c in range(2):
        col = [q0[0][c], q0[1][c]]
        xs = col
        ys = [rows[i][0] * xs[0] + rows[i][1] * xs[1] + (1 if i == c else 0) for i in range(2)]
        big.append(xs + ys)
    gram = [[sbar(big[c], ej) for ej in (e1t, e2t)] for c in range(2)]
    dual = mat_inv(gram)
    f1t = vadd(vscale(big[0], dual[0][0]), vscale(big[1], dual[0][1]))
    f2t = vadd(vscale(big[0], dual[1][0]), vscale(big[1], dual[1][1]))
    rho, dens = curve_invariants(curve)
    return CanonicalFrame(e1t, e2t, f1t, f2t, scale2, rho, dens)


@dataclass(frozen=True)
class StructuralResidual:
    rows: tuple[Vec, Vec, Vec, Vec]
    eqe1: Vec
    duality: tuple[Series1, ...]
    normalization: Series1  # scale2 * sigma(e1t'', e1t') - 36

    def vanishes(self) -> bool:
        parts = [c for row in self.rows for c in row] + list(self.eqe1) + list(self.duality)
        return all(c.is_zero() for c in parts) and self.normalization.is_zero()

    def min_order(self) -> int | None:
        precs = [c.prec for row in self.rows for c in row if c.prec is not None]
        precs += [c.prec for c in self.eqe1 if c.prec is not None]
        return min(precs) if precs else None


def structural_eq_check(frame: CanonicalFrame) -> StructuralResidual:
    """Residuals of the four frame equations (scaled by c) and of the fourth-order equation for e1."""
    c2 = frame.scale2
    rho, a = frame.rho, frame.density
    drho = rho.diff()
    ddrho = drho.diff()
    e1, e2, f1, f2 = frame.e1t, frame.e2t, frame.f1t, frame.f2t
    row1 = vadd(vdiff(e1), vscale(e2, -3))
    row2 = vadd(vscale(vadd(vdiff(e2), vscale(e1, rho * Fraction(-1, 4))), c2), vscale(f2, -4))
    k3 = a * Fraction(35, 36) - rho * rho * Fraction(1, 8) + ddrho * Fraction(1, 16)
    row3 = vadd(
        vdiff(f1),
        vscale(vadd(vscale(e1, k3), vscale(e2, drho * Fraction(7, 16))), c2),
        vscale(f2, rho * Fraction(1, 4)),
    )
    row4 = vadd(
        vdiff(f2),
        vscale(vadd(vscale(e1, drho * Fraction(7, 16)), vscale(e2, rho * Fraction(9, 4))), c2),
        vscale(f1, 3),
    )
    d1 = vdiff(e1)
    d2 = vdiff(d1)
    d4 = vdiff(vdiff(d2))
    coef = a * 35 - rho * rho * Fraction(81, 16) - ddrho * Fraction(9, 4)
    eqe1 = vadd(d4, vscale(e1, -coef), vscale(d1, drho * Fraction(15, 2)), vscale(d2, rho * Fraction(15, 2)))
    duality = (
        sbar(f1, e1) - 1,
        sbar(f1, e2),
        sbar(f2, e1),
        sbar(f2, e2) - 1,
        sbar(f1, f2),
        sbar(e1, e2),
    )
    norm = sbar(d2, d1) * c2 - 36
    return StructuralResidual((row1, row2, row3, row4), eqe1, duality, norm)


# -- Laurent expansion of w --------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentFrame:
    """w(t, 0) = (a1 t^-2 + a2 t^-1 + O(1)) / sqrt(d0)."""

    a1: list[Fraction]
    a2: list[Fraction]
    inv_d0: Fraction


def w_laurent(curve: MatCurve, order: int | None = None) -> LaurentFrame:
    """Leading Laurent coefficients of w(t, 0), with S_t - S_0 = int v v^T and v = Sdot[:, j] / sqrt(Sdot_jj)."""
    if curve.m != 2:
        raise DimensionMismatch("w_laurent is implemented for m = 2")
    if order is not None:
        curve = curve.truncate(order)
    s0 = curve.coefficient(0)
    rows = [[e - s0[i][j] for j, e in enumerate(row)] for i, row in enumerate(curve.rows())]
    vel = curve.derivative().rows()
    j = 0 if vel[0][0].coeff(0) != 0 else 1
    djj = vel[j][j]
    d0 = djj.coeff(0)
    if d0 <= 0:
        raise SignViolation("velocity is not positive at 0")
    half = ((djj * (1 / d0)).log() * Fraction(-1, 2)).exp()
    inv = mat_inv(rows)
    col = [[vel[0][j] * half], [vel[1][j] * half]]
    w = [r[0] for r in mat_mul(inv, col)]
    full = w + [s0[i][0] * w[0] + s0[i][1] * w[1] for i in range(2)]
    for c in full:
        if c.terms and min(c.terms) < -2:
            raise OrderUnderflow("w has a pole of order above 2; the curve is not of weight 4")
    a1 = [c.coeff(-2) for c in full]
    a2 = [c.coeff(-1) for c in full]
    return LaurentFrame(a1, a2, 1 / d0)


def laurent_agrees(frame: CanonicalFrame, lf: LaurentFrame) -> bool:
    """Outer products e_i e_j^T at 0 agree with those of the w coefficients (signs drop out)."""
    e1, e2 = frame.e_at_zero()
    pairs = ((e1, e1, lf.a1, lf.a1), (e1, e2, lf.a1, lf.a2), (e2, e2, lf.a2, lf.a2))
    for x, y, a, b in pairs:
        for i in range(4):
            for k in range(4):
                if frame.scale2 * x[i] * y[k] != lf.inv_d0 * a[i] * b[k]:
                    return False
    return True
