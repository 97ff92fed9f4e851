"""Reduced Jacobi curves of abnormal extremals as truncated matrix series.

At lambda on (D^2)^perp the fields theta, X, d/du6..d/dun span J^(0).  Their
pushforwards along the flow of h are sum_j t^j/j! (ad h)^j V; modulo span(e, h)
they live in the 2m-dimensional space W_lambda spanned by the first 2m
transversal fields.  A linear Darboux change brings sigma to y.x' - x.y' and the
curve is read off as the graph S_t = Y_t X_t^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..errors import BasisDegenerateAtPoint, InconsistentSystem, NonzeroResidual, NotLagrangian, WrongDimension
from ..cotangent import (
    _check_lambda,
    _eval,
    ad_sequence,
    char_field,
    symplectic,
    transversal_basis,
)
from ..invariants import run_pipeline
from ..manifold import Frame
from ..symbalg import linalg
from ..symbalg.series import Series1, mat_inv, mat_mul
from .curves import MatCurve, curve_invariants

Point = Mapping[str, Fraction]


def _darboux(omega: list[list[Fraction]], m: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(G^T, N) with y = G^T eta, x = xi - N y turning sigma into y.x' - x.y'."""
    for i in range(m):
        for j in range(m):
            if omega[i][j] != 0:
                raise NotLagrangian("the first half of the transversal basis is not isotropic at lambda")
    g = [[omega[m + i][j] for j in range(m)] for i in range(m)]
    gt = linalg.transpose(g)
    try:
        mm = linalg.transpose(linalg.inverse(g))
    except InconsistentSystem:
        raise BasisDegenerateAtPoint("sigma pairs the two halves of the basis degenerately") from None
    oyy = [[omega[m + i][m + j] for j in range(m)] for i in range(m)]
    k = mat_mul(mat_mul(linalg.transpose(mm), oyy), mm)
    n = [[-c / 2 for c in row] for row in k]
    return gt, n


def reduced_jacobi_series(frame: Frame, lam: Point, order: int = 10) -> MatCurve:
    """S_t of the reduced Jacobi curve through lam, truncated at t^order."""
    if frame.n < 5:
        raise WrongDimension("reduced Jacobi curves need n >= 5")
    _check_lambda(frame, lam)
    n = frame.n
    m = n - 3
    basis = transversal_basis(frame)
    vals = [v.at(lam) for v in basis]
    cols = linalg.transpose(vals)
    if linalg.rank(vals) < len(basis):
        raise BasisDegenerateAtPoint("the transversal fields are dependent at lambda")
    omega = [[_eval(symplectic(basis[i], basis[j]), lam) for j in range(2 * m)] for i in range(2 * m)]
    gt, nmat = _darboux(omega, m)
    h = char_field(frame)
    z_index = 2 * m
    xi = [[dict() for _ in range(m)] for _ in range(m)]  # xi[i][col] : {power: coeff}
    eta = [[dict() for _ in range(m)] for _ in range(m)]
    for col in range(m):
        seq = ad_sequence(h, basis[col], order - 1, on_d2perp=True)
        for j, v in enumerate(seq):
            coords = linalg.solve(cols, v.at(lam))
            if coords[z_index] != 0:
                raise NonzeroResidual("a pushed field has a Z component; it left J")
            w = Fraction(1, math.factorial(j))
            for i in range(m):
                if coords[i]:
                    xi[i][col][j] = coords[i] * w
                if coords[m + i]:
                    eta[i][col][j] = coords[m + i] * w
    xs = [[Series1(xi[i][c], order) for c in range(m)] for i in range(m)]
    es = [[Series1(eta[i][c], order) for c in range(m)] for i in range(m)]
    ys = [[sum((es[k][c] * gt[i][k] for k in range(m)), Series1({}, order)) for c in range(m)] for i in range(m)]
    xx = [[xs[i][c] - sum((ys[k][c] * nmat[i][k] for k in range(m)), Series1({}, order)) for c in range(m)]
          for i in range(m)]
    s = mat_mul(ys, mat_inv(xx))
    for i in range(m):
        for j in range(i + 1, m):
            if not s[i][j].agrees_with(s[j][i]):
                raise NotLagrangian(f"reduced Jacobi series is not symmetric in entry ({i + 1},{j + 1})")
    trace = sum((s[i][i].coeff(1) for i in range(m)), Fraction(0))
    if trace < 0:
        s = [[-c for c in row] for row in s]
    return MatCurve(tuple(tuple(row) for row in s))


@dataclass(frozen=True)
class CrossCheck:
    series_value: Fraction
    pipeline_value: Fraction

    @property
    def match(self) -> bool:
        return self.series_value == self.pipeline_value


def cross_check_A(frame: Frame, lam: Point, order: int = 10, style: str = "inv_u5") -> CrossCheck:
    """A(0) of the reduced Jacobi series against the symbolic fundamental form at lam."""
    if frame.n != 5:
        raise WrongDimension("the cross-check compares with the n = 5 pipeline")
    curve = reduced_jacobi_series(frame, lam, order)
    _, dens = curve_invariants(curve)
    report = run_pipeline(frame, style)
    expr = report.form.expr
    value = _eval(expr, {k: v for k, v in lam.items() if k in expr.symbols()}) if not expr.is_constant() else expr.constant_value()
    return CrossCheck(dens.coeff(0), value)
