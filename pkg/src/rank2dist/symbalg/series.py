"""Truncated Laurent series in one and two variables with exact coefficients.

Precision is absolute: a :class:`Series1` with ``prec = N`` knows every
coefficient of ``t^k`` for ``k < N``; ``prec = None`` marks an exact (finite)
series.  A :class:`Series2` uses total degree: ``prec = N`` means every
coefficient of ``x^i y^j`` with ``i + j < N`` is known.  Exponents may be
negative; coefficients outside the known region are never consulted.

Arithmetic propagates the guaranteed order.  Asking for information beyond it
raises :class:`OrderUnderflow`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from ..errors import NotDivisible, OrderUnderflow

INF = math.inf


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    return Fraction(int(v.p), int(v.q))


def _pmin(*vals):
    out = INF
    for v in vals:
        if v is not None and v < out:
            out = v
    return out


def _as_prec(v):
    return None if v == INF else int(v)


class Series1:
    """Truncated Laurent series in one variable."""

    __slots__ = ("terms", "prec")

    def __init__(self, terms: Mapping[int, object], prec: int | None = None):
        clean = {}
        for k, c in terms.items():
            c = _q(c)
            if c and (prec is None or k < prec):
                clean[int(k)] = c
        self.terms = clean
        self.prec = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[object], start: int = 0, prec: int | None = None) -> "Series1":
        return cls({start + i: c for i, c in enumerate(coeffs)}, prec)

    @classmethod
    def const(cls, c, prec: int | None = None) -> "Series1":
        return cls({0: c}, prec)

    @classmethod
    def var(cls, prec: int | None = None) -> "Series1":
        return cls({1: 1}, prec)

    # -- inspection ---------------------------------------------------------

    def lower(self) -> float:
        """Smallest exponent that may carry a nonzero coefficient."""
        if self.terms:
            return min(self.terms)
        return INF if self.prec is None else self.prec

    def valuation(self) -> int:
        if not self.terms:
            raise OrderUnderflow("series vanishes to its tracked order")
        return min(self.terms)

    def coeff(self, k: int) -> Fraction:
        if self.prec is not None and k >= self.prec:
            raise OrderUnderflow(f"coefficient t^{k} beyond tracked order {self.prec}")
        return self.terms.get(k, Fraction(0))

    def coeffs(self, start: int, stop: int) -> list[Fraction]:
        return [self.coeff(k) for k in range(start, stop)]

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, prec: int) -> "Series1":
        p = prec if self.prec is None else min(prec, self.prec)
        return Series1(self.terms, p)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*t^{k}" for k, c in sorted(self.terms.items())) or "0"
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return f"Series1({body}{tail})"

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Series1.const(other)
        if not isinstance(other, Series1):
            return NotImplemented
        return self.terms == other.terms and self.prec == other.prec

    def agrees_with(self, other: "Series1") -> bool:
        """Equality of coefficients on the common known range."""
        p = _pmin(self.prec, other.prec)
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys if k < p)

    # -- ring operations ----------------------------------------------------

    def _lift(self, other) -> "Series1":
        if isinstance(other, Series1):
            return other
        return Series1.const(_q(other))

    def __add__(self, other) -> "Series1":
        o = self._lift(other)
        prec = _as_prec(_pmin(self.prec, o.prec))
        terms = dict(self.terms)
        for k, c in o.terms.items():
            terms[k] = terms.get(k, 0) + c
        return Series1(terms, prec)

    __radd__ = __add__

    def __neg__(self) -> "Series1":
        return Series1({k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other) -> "Series1":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Series1":
        return self._lift(other) + (-self)

    def __mul__(self, other) -> "Series1":
        if not isinstance(other, Series1):
            c = _q(other)
            return Series1({k: v * c for k, v in self.terms.items()}, self.prec)
        la, lb = self.lower(), other.lower()
        prec = _as_prec(_pmin(
            None if self.prec is None else self.prec + lb,
            None if other.prec is None else other.prec + la,
        ))
        terms: dict[int, Fraction] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                k = i + j
                if prec is None or k < prec:
                    terms[k] = terms.get(k, 0) + a * b
        return Series1(terms, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "Series1":
        """Multiply by t^k."""
        return Series1({e + k: c for e, c in self.terms.items()}, None if self.prec is None else self.prec + k)

    def inverse(self) -> "Series1":
        v = self.valuation()
        c = self.terms[v]
        if self.prec is None:
            if len(self.terms) == 1:
                return Series1({-v: 1 / c})
            raise OrderUnderflow("inverse of an exact non-monomial series needs a truncation order")
        rel = self.prec - v
        a = [self.terms.get(v + i, Fraction(0)) / c for i in range(rel)]
        b = [Fraction(0)] * rel
        b[0] = Fraction(1)
        for k in range(1, rel):
            b[k] = -sum(a[j] * b[k - j] for j in range(1, k + 1))
        return Series1({i - v: b[i] / c for i in range(rel)}, rel - v)

    def __truediv__(self, other) -> "Series1":
        if not isinstance(other, Series1):
            return self * (1 / _q(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Series1":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "Series1":
        if k < 0:
            return self.inverse() ** (-k)
        out = Series1.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- calculus -----------------------------------------------------------

    def diff(self) -> "Series1":
        return Series1(
            {k - 1: k * c for k, c in self.terms.items() if k != 0},
            None if self.prec is None else self.prec - 1,
        )

    def integrate(self) -> "Series1":
        if -1 in self.terms:
            raise ValueError("series has a residue; its antiderivative is not a Laurent series")
        return Series1(
            {k + 1: c / (k + 1) for k, c in self.terms.items()},
            None if self.prec is None else self.prec + 1,
        )

    def log(self) -> "Series1":
        """Logarithm with the constant log(c) of the leading coefficient dropped."""
        v = self.valuation()
        if v != 0:
            raise ValueError("logarithm needs a nonzero constant term")
        if self.prec is None and len(self.terms) == 1:
            return Series1({})
        if self.prec is None:
            raise OrderUnderflow("logarithm of an exact non-constant series needs a truncation order")
        return (self.diff() / self).integrate()

    def exp(self) -> "Series1":
        if self.terms and min(self.terms) < 1:
            raise ValueError("exp needs a series without constant or polar part")
        if self.prec is None:
            if not self.terms:
                return Series1.const(1)
            raise OrderUnderflow("exp of an exact nonzero series needs a truncation order")
        n = self.prec
        e = [Fraction(0)] * n
        e[0] = Fraction(1)
        for k in range(1, n):
            e[k] = sum(j * self.terms.get(j, 0) * e[k - j] for j in range(1, k + 1)) / k
        return Series1({k: e[k] for k in range(n)}, n)

    def compose(self, g: "Series1") -> "Series1":
        """self(g(t)) for g with positive valuation."""
        vg = g.lower()
        if vg < 1:
            raise ValueError("inner series must vanish at 0")
        if not self.terms:
            prec = None if self.prec is None else _as_prec(self.prec * vg)
            return Series1({}, prec)
        lo = min(self.terms)
        hi = max(self.terms)
        out = Series1({}, None)
        power = g ** lo if lo >= 0 else g.inverse() ** (-lo)
        for k in range(lo, hi + 1):
            c = self.terms.get(k)
            if c:
                out = out + power * c
            if k < hi:
                power = power * g
        if self.prec is not None:
            bound = self.prec * vg if self.prec >= 0 else self.prec
            out = out.truncate(_as_prec(_pmin(bound, out.prec)))
        return out

    def __call__(self, g: "Series1") -> "Series1":
        return self.compose(g)


class Series2:
    """Truncated Laurent series in two variables with total-degree precision."""

    __slots__ = ("terms", "prec", "names")

    def __init__(self, terms: Mapping[tuple[int, int], object], prec: int | None = None,
                 names: tuple[str, str] = ("x", "y")):
        clean = {}
        for (i, j), c in terms.items():
            c = _q(c)
            if c and (prec is None or i + j < prec):
                clean[(int(i), int(j))] = c
        self.terms = clean
        self.prec = prec
        self.names = names

    @classmethod
    def const(cls, c, prec: int | None = None, names=("x", "y")) -> "Series2":
        return cls({(0, 0): c}, prec, names)

    @classmethod
    def var(cls, which: int, prec: int | None = None, names=("x", "y")) -> "Series2":
        return cls({(1, 0) if which == 0 else (0, 1): 1}, prec, names)

    @classmethod
    def from_univariate(cls, f: Series1, which: int, names=("x", "y")) -> "Series2":
        terms = {((k, 0) if which == 0 else (0, k)): c for k, c in f.terms.items()}
        return cls(terms, f.prec, names)

    def _new(self, terms, prec) -> "Series2":
        return Series2(terms, prec, self.names)

    # -- inspection ---------------------------------------------------------

    def lower(self) -> float:
        if self.terms:
            return min(i + j for i, j in self.terms)
        return INF if self.prec is None else self.prec

    def coeff(self, i: int, j: int) -> Fraction:
        if self.prec is not None and i + j >= self.prec:
            raise OrderUnderflow(f"coefficient ({i},{j}) beyond tracked total degree {self.prec}")
        return self.terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, prec: int) -> "Series2":
        p = prec if self.prec is None else min(prec, self.prec)
        return self._new(self.terms, p)

    def lowest_form(self) -> dict[tuple[int, int], Fraction]:
        if not self.terms:
            raise OrderUnderflow("series vanishes to its tracked order")
        d = min(i + j for i, j in self.terms)
        return {k: c for k, c in self.terms.items() if k[0] + k[1] == d}

    def __repr__(self) -> str:
        x, y = self.names
        body = " + ".join(f"{c}*{x}^{i}*{y}^{j}" for (i, j), c in sorted(self.terms.items())) or "0"
        tail = "" if self.prec is None else f" + O(deg {self.prec})"
        return f"Series2({body}{tail})"

    def agrees_with(self, other: "Series2") -> bool:
        p = _pmin(self.prec, other.prec)
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys if k[0] + k[1] < p)

    # -- ring operations ----------------------------------------------------

    def _lift(self, other) -> "Series2":
        if isinstance(other, Series2):
            return other
        return Series2.const(_q(other), None, self.names)

    def __add__(self, other) -> "Series2":
        o = self._lift(other)
        prec = _as_prec(_pmin(self.prec, o.prec))
        terms = dict(self.terms)
        for k, c in o.terms.items():
            terms[k] = terms.get(k, 0) + c
        return self._new(terms, prec)

    __radd__ = __add__

    def __neg__(self) -> "Series2":
        return self._new({k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other) -> "Series2":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Series2":
        return self._lift(other) + (-self)

    def __mul__(self, other) -> "Series2":
        if not isinstance(other, Series2):
            c = _q(other)
            return self._new({k: v * c for k, v in self.terms.items()}, self.prec)
        la, lb = self.lower(), other.lower()
        prec = _as_prec(_pmin(
            None if self.prec is None else self.prec + lb,
            None if other.prec is None else other.prec + la,
        ))
        terms: dict[tuple[int, int], Fraction] = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                e0, e1 = i + k, j + l
                if prec is None or e0 + e1 < prec:
                    key = (e0, e1)
                    terms[key] = terms.get(key, 0) + a * b
        return self._new(terms, prec)

    __rmul__ = __mul__

    def shift(self, di: int, dj: int) -> "Series2":
        return self._new(
            {(i + di, j + dj): c for (i, j), c in self.terms.items()},
            None if self.prec is None else self.prec + di + dj,
        )

    def divide_by_power(self, which: int, k: int) -> "Series2":
        """Exact division by x^k (which=0) or y^k (which=1)."""
        for (i, j), c in self.terms.items():
            e = i if which == 0 else j
            if e < k:
                raise NotDivisible(f"series is not divisible by {self.names[which]}^{k}")
        return self.shift(-k, 0) if which == 0 else self.shift(0, -k)

    def _unit_split(self):
        form = self.lowest_form()
        if len(form) != 1:
            raise NotDivisible("lowest homogeneous part is not a monomial; series is not invertible here")
        (a, b), c = next(iter(form.items()))
        return a, b, c

    def inverse(self) -> "Series2":
        a, b, c = self._unit_split()
        if self.prec is None:
            if len(self.terms) == 1:
                return self._new({(-a, -b): 1 / c}, None)
            raise OrderUnderflow("inverse of an exact non-monomial series needs a truncation order")
        rel = self.prec - (a + b)
        r = self._new({(i - a, j - b): v / c for (i, j), v in self.terms.items() if (i, j) != (a, b)}, rel)
        acc = Series2.const(1, rel, self.names)
        term = Series2.const(1, rel, self.names)
        for _ in range(1, rel):
            term = -(term * r)
            if term.is_zero():
                break
            acc = acc + term
        return acc.shift(-a, -b) * (1 / c)

    def __truediv__(self, other) -> "Series2":
        if not isinstance(other, Series2):
            return self * (1 / _q(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Series2":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "Series2":
        if k < 0:
            return self.inverse() ** (-k)
        out = Series2.const(1, None, self.names)
        for _ in range(k):
            out = out * self
        return out

    def log(self) -> "Series2":
        """Logarithm with the constant log(c) dropped."""
        a, b, c = self._unit_split()
        if (a, b) != (0, 0):
            raise ValueError("logarithm needs a nonzero constant term")
        if self.prec is None:
            if len(self.terms) == 1:
                return self._new({}, None)
            raise OrderUnderflow("logarithm of an exact non-constant series needs a truncation order")
        rel = self.prec
        r = self._new({k: v / c for k, v in self.terms.items() if k != (0, 0)}, rel)
        acc = self._new({}, rel)
        power = Series2.const(1, rel, self.names)
        for n in range(1, rel):
            power = power * r
            if power.is_zero():
                break
            acc = acc + power * Fraction((-1) ** (n + 1), n)
        return acc

    # -- calculus and substitutions -----------------------------------------

    def diff(self, which: int) -> "Series2":
        terms = {}
        for (i, j), c in self.terms.items():
            e = i if which == 0 else j
            if e:
                terms[(i - 1, j) if which == 0 else (i, j - 1)] = e * c
        return self._new(terms, None if self.prec is None else self.prec - 1)

    def coefficient_series(self, which: int, k: int) -> Series1:
        """Coefficient of y^k (which=1) or x^k (which=0) as a series in the other variable."""
        terms = {}
        for (i, j), c in self.terms.items():
            if which == 1 and j == k:
                terms[i] = c
            elif which == 0 and i == k:
                terms[j] = c
        return Series1(terms, None if self.prec is None else self.prec - k)

    def restrict_zero(self, which: int) -> Series1:
        """Set one variable to zero (which=1 sets y=0)."""
        for (i, j) in self.terms:
            if (j if which == 1 else i) < 0:
                raise ValueError("cannot set a variable with negative exponents to zero")
        return self.coefficient_series(which, 0)

    def diagonal(self) -> Series1:
        """The univariate series t -> F(t, t)."""
        for (i, j) in self.terms:
            if i < 0 or j < 0:
                raise ValueError("diagonal of a Laurent series")
        terms: dict[int, Fraction] = {}
        for (i, j), c in self.terms.items():
            terms[i + j] = terms.get(i + j, 0) + c
        return Series1(terms, self.prec)

    def linear_change(self, m: Sequence[Sequence[object]], names=("x", "y")) -> "Series2":
        """Substitute x = m00 X + m01 Y, y = m10 X + m11 Y."""
        (a, b), (c, d) = [[_q(v) for v in row] for row in m]
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), coef in self.terms.items():
            if i < 0 or j < 0:
                raise ValueError("linear change of a Laurent series")
            px = _binomial_expand(a, b, i)
            py = _binomial_expand(c, d, j)
            for (p0, p1), u in px.items():
                for (q0, q1), v in py.items():
                    key = (p0 + q0, p1 + q1)
                    out[key] = out.get(key, 0) + coef * u * v
        return Series2(out, self.prec, names)

    def compose(self, f0: "Series2", f1: "Series2") -> "Series2":
        """self(f0, f1) for series f0, f1 of positive valuation."""
        v0, v1 = f0.lower(), f1.lower()
        if v0 < 1 or v1 < 1:
            raise ValueError("inner series must vanish at the origin")
        out = Series2({}, None, f0.names)
        pow0: dict[int, Series2] = {0: Series2.const(1, None, f0.names)}
        pow1: dict[int, Series2] = {0: Series2.const(1, None, f0.names)}
        for (i, j), c in sorted(self.terms.items()):
            if i < 0 or j < 0:
                raise ValueError("composition of a Laurent series")
            for k in range(max(pow0) + 1, i + 1):
                pow0[k] = pow0[k - 1] * f0
            for k in range(max(pow1) + 1, j + 1):
                pow1[k] = pow1[k - 1] * f1
            out = out + pow0[i] * pow1[j] * c
        if self.prec is not None:
            bound = self.prec * min(v0, v1)
            out = out.truncate(_as_prec(_pmin(bound, out.prec)))
        return out


def _binomial_expand(a: Fraction, b: Fraction, n: int) -> dict[tuple[int, int], Fraction]:
    return {(k, n - k): math.comb(n, k) * a**k * b ** (n - k) for k in range(n + 1) if (a**k * b ** (n - k))}


# -- matrices of series ----------------------------------------------------------

T = TypeVar("T")


def mat_det(m: Sequence[Sequence[T]]) -> T:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * mat_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def mat_adj(m: Sequence[Sequence[T]]) -> list[list[T]]:
    n = len(m)
    if n == 1:
        return [[m[0][0] * 0 + 1]]
    adj: list[list[T]] = [[None] * n for _ in range(n)]  # type: ignore[list-item]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
            c = mat_det(minor)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def mat_mul(a: Sequence[Sequence[T]], b: Sequence[Sequence[T]]) -> list[list[T]]:
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = a[i][0] * b[0][j]
            for l in range(1, k):
                acc = acc + a[i][l] * b[l][j]
            row.append(acc)
        out.append(row)
    return out


def mat_inv(m: Sequence[Sequence[T]]) -> list[list[T]]:
    d = mat_det(m)
    dinv = 1 / d
    return [[c * dinv for c in row] for row in mat_adj(m)]


def mat_map(m: Sequence[Sequence[T]], f: Callable[[T], T]) -> list[list[T]]:
    return [[f(c) for c in row] for row in m]


def mat_trace(m: Sequence[Sequence[T]]) -> T:
    acc = m[0][0]
    for i in range(1, len(m)):
        acc = acc + m[i][i]
    return acc
