"""Exact Gaussian elimination over a field.

The routines are generic in the scalar type: they work for ``Fraction``
matrices (values at a point) and for :class:`~rank2dist.symbalg.expr.Expr`
matrices (the rational-function field of a chart).  For expressions the pivot
with the smallest representation is preferred to limit intermediate growth.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Sequence

from ..errors import InconsistentSystem


def _is_zero(v: Any) -> bool:
    if isinstance(v, (int, Fraction)):
        return v == 0
    return v.is_zero()


def _size(v: Any) -> int:
    if isinstance(v, (int, Fraction)):
        return 0
    return len(v.num) + len(v.den)


def row_echelon(
    rows: Sequence[Sequence[Any]],
    is_zero: Callable[[Any], bool] = _is_zero,
) -> tuple[list[list[Any]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, len(m)):
            if not is_zero(m[i][c]):
                if best is None or _size(m[i][c]) < _size(m[best][c]):
                    best = i
        if best is None:
            continue
        m[r], m[best] = m[best], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv if not is_zero(v) else v for v in m[r]]
        for i in range(len(m)):
            if i != r and not is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b if not is_zero(b) else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[Any]], is_zero: Callable[[Any], bool] = _is_zero) -> int:
    if not rows:
        return 0
    return len(row_echelon(rows, is_zero)[1])


def solve(
    a: Sequence[Sequence[Any]],
    b: Sequence[Any],
    is_zero: Callable[[Any], bool] = _is_zero,
) -> list[Any]:
    """Unique solution of ``a x = b`` (``a`` may be overdetermined).

    Raises :class:`InconsistentSystem` when there is no solution or it is not
    unique.
    """
    ncols = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = row_echelon(aug, is_zero)
    if ncols in pivots:
        raise InconsistentSystem("linear system has no solution")
    if len(pivots) < ncols:
        raise InconsistentSystem("linear system is underdetermined")
    x: list[Any] = [None] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][ncols]
    return x


def nullspace(rows: Sequence[Sequence[Any]], one: Any = Fraction(1), zero: Any = Fraction(0),
              is_zero: Callable[[Any], bool] = _is_zero) -> list[list[Any]]:
    """Basis of the right kernel."""
    ncols = len(rows[0])
    m, pivots = row_echelon(rows, is_zero)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -m[r][f]
        basis.append(v)
    return basis


def inverse(a: Sequence[Sequence[Any]], one: Any = Fraction(1), zero: Any = Fraction(0),
            is_zero: Callable[[Any], bool] = _is_zero) -> list[list[Any]]:
    n = len(a)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    m, pivots = row_echelon(aug, is_zero)
    if pivots[:n] != list(range(n)):
        raise InconsistentSystem("matrix is singular")
    return [row[n:] for row in m]


def transpose(a: Sequence[Sequence[Any]]) -> list[list[Any]]:
    return [list(col) for col in zip(*a)]


def det(a: Sequence[Sequence[Any]], one: Any = Fraction(1), is_zero: Callable[[Any], bool] = _is_zero) -> Any:
    """Determinant by elimination (sign tracked through row swaps)."""
    m = [list(r) for r in a]
    n = len(m)
    acc = one
    for c in range(n):
        best = None
        for i in range(c, n):
            if not is_zero(m[i][c]) and (best is None or _size(m[i][c]) < _size(m[best][c])):
                best = i
        if best is None:
            return one - one
        if best != c:
            m[c], m[best] = m[best], m[c]
            acc = -acc
        piv = m[c][c]
        acc = acc * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if not is_zero(m[i][c]):
                f = m[i][c] * inv
                m[i] = [x - f * y if not is_zero(y) else x for x, y in zip(m[i], m[c])]
    return acc
