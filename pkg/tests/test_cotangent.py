from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rank2dist import catalog
from rank2dist.cotangent import (
    co_bracket,
    char_field,
    deficiency_polynomial,
    euler_field,
    f_field,
    fiber_field,
    fiber_point,
    hamiltonian_lift,
    j_flag,
    j_spanning,
    monotonicity_certificate,
    n6_quadratic_form,
    poisson,
    random_fiber_point,
    rd_membership,
    weight_jump_locus,
)
from rank2dist.errors import DegenerateFrame, WrongDimension
from rank2dist.manifold import DistributionSpec, Frame, VField, build_adapted_frame
from rank2dist.symbalg import Chart
from rank2dist.symbalg import linalg


@pytest.fixture(scope="module")
def d1_frame():
    return build_adapted_frame(catalog.d1())


@pytest.fixture(scope="module")
def d2_frame():
    return build_adapted_frame(catalog.d2())


@pytest.fixture(scope="module")
def dtilde_frame():
    return build_adapted_frame(catalog.dtilde())


def test_abelian_lift_is_the_field():
    chart = Chart(["x1", "x2", "x3", "x4", "x5"])
    fields = [VField.coordinate(chart, i) for i in range(5)]
    frame = Frame(fields)
    for i in range(1, 6):
        lift = hamiltonian_lift(frame, i)
        assert lift.projection() == fields[i - 1]
        assert all(c.is_zero() for c in lift.fiber)


def test_nilpotent_lift_of_u1(d1_frame):
    chart = d1_frame.chart
    expected = hamiltonian_lift(d1_frame, 1).fiber
    assert expected[1] == chart.u(2) and expected[2] == chart.u(3)
    assert expected[0].is_zero() and expected[3].is_zero() and expected[4].is_zero()


@pytest.mark.parametrize("name", ["D1", "D2", "rolling(1,2)"])
def test_poisson_consistency(name):
    frame = build_adapted_frame(catalog.get(name))
    chart = frame.chart
    for i in range(1, 6):
        lift = hamiltonian_lift(frame, i)
        for j in range(1, 6):
            structural = sum((frame.c(j, i, k) * chart.u(k - 1) for k in range(1, 6)), chart.zero())
            assert lift.apply(chart.u(j - 1)) == poisson(frame, i, j) == structural


def test_nilpotent_characteristic_field(d1_frame):
    chart = d1_frame.chart
    h = char_field(d1_frame).restrict()
    assert list(h.base) == [-chart.u(4), chart.u(3), chart.zero(), chart.zero(), chart.zero()]


@pytest.mark.parametrize("name", ["D1", "D2", "Dtilde"])
def test_characteristic_field_is_tangent(name):
    frame = build_adapted_frame(catalog.get(name))
    h = char_field(frame)
    for i in range(3):
        assert h.apply(frame.chart.u(i)).subs({"u1": 0, "u2": 0, "u3": 0}).is_zero()


def test_euler_field(d2_frame):
    e = euler_field(d2_frame)
    chart = d2_frame.chart
    for j in range(1, 6):
        assert e.apply(chart.u(j - 1)) == chart.u(j - 1)
        d = fiber_field(d2_frame, j)
        assert co_bracket(e, d) == -d


def test_bracket_antisymmetry(d2_frame):
    h = char_field(d2_frame)
    assert co_bracket(h, h).is_zero()


@pytest.mark.parametrize("name", ["D1", "D2", "D3h"])
def test_h_bracket_f_modulo_j1(name):
    frame = build_adapted_frame(catalog.get(name))
    chart = frame.chart
    h = char_field(frame)
    diff = co_bracket(h, f_field(frame)) - (
        hamiltonian_lift(frame, 5).scale(chart.u(3)) - hamiltonian_lift(frame, 4).scale(chart.u(4))
    )
    # u4, u5 lifts leave (D^2)^perp, so compare modulo the normal directions d/du1..d/du3
    j1 = j_spanning(frame, 1)[1] + [fiber_field(frame, i) for i in (1, 2, 3)]
    rng = random.Random(3)
    for _ in range(3):
        lam = random_fiber_point(frame, rng, frame.base_point)
        rows = [v.at(lam) for v in j1]
        assert linalg.rank(rows + [diff.at(lam)]) == linalg.rank(rows)


def test_j_flag_generic_and_jump(d2_frame, dtilde_frame):
    assert tuple(j_flag(d2_frame, imax=2).dims) == (4, 5, 6)
    n = 6
    lam = fiber_point(dtilde_frame, dtilde_frame.base_point, {"u5": 1, "u6": 0})
    dims = j_flag(dtilde_frame, lam, imax=n - 2).dims
    assert dims[n - 4] == dims[n - 3] == 2 * n - 5


@pytest.mark.parametrize("name", ["D2", "Dtilde", "Dbar(6)"])
def test_j_flag_steps_at_most_one(name):
    frame = build_adapted_frame(catalog.get(name))
    rng = random.Random(11)
    for _ in range(2):
        lam = random_fiber_point(frame, rng, frame.base_point)
        dims = j_flag(frame, lam, imax=frame.n - 2).dims
        assert all(0 <= b - a <= 1 for a, b in zip(dims, dims[1:]))


def test_rd_membership(d2_frame):
    assert rd_membership(d2_frame)
    assert not rd_membership(build_adapted_frame(catalog.dbar(6)))


def test_d3_of_dimension_four_cannot_be_framed():
    c = Chart(["x1", "x2", "x3", "x4", "x5"])
    x = c.x(0)
    d = DistributionSpec(c, VField.coordinate(c, 0), VField(c, [0, 1, x, x * x / 2, x * x * x / 6]), {k: 0 for k in c.base})
    with pytest.raises(DegenerateFrame):
        build_adapted_frame(d)


def test_deficiency_polynomials(d2_frame, dtilde_frame):
    assert deficiency_polynomial(d2_frame).expr == d2_frame.chart.one()
    chart = dtilde_frame.chart
    c = dtilde_frame.c
    u4, u5 = chart.u(3), chart.u(4)
    expected = c(5, 2, 6) * u4 * u4 - (c(4, 2, 6) + c(5, 1, 6)) * u4 * u5 + c(4, 1, 6) * u5 * u5
    assert deficiency_polynomial(dtilde_frame).expr == expected
    bar = deficiency_polynomial(build_adapted_frame(catalog.dbar(6)))
    assert not bar.is_zero()
    assert max(sum(k) for k in bar.coefficients()) == 2


def test_weight_jump_locus(dtilde_frame):
    loc = weight_jump_locus(dtilde_frame)
    assert loc.complex_nonempty and loc.real_nonempty
    assert loc.witness["u4"] == 0 and loc.witness["u5"] != 0
    assert weight_jump_locus(build_adapted_frame(catalog.dbar(6))).complex_nonempty
    empty = weight_jump_locus(build_adapted_frame(catalog.d0(6)))
    assert not empty.complex_nonempty and not empty.real_nonempty
    with pytest.raises(WrongDimension):
        weight_jump_locus(build_adapted_frame(catalog.d2()))


def test_n6_quadratic_form(dtilde_frame):
    q = n6_quadratic_form(dtilde_frame)
    assert any(q.values())
    assert not any(n6_quadratic_form(build_adapted_frame(catalog.dbar(6))).values())
    # scaling X1 by 2 rescales alpha; the zero set is unchanged
    d = catalog.dtilde()
    scaled = build_adapted_frame(d.with_basis(d.x1.scale(2), d.x2))
    q2 = n6_quadratic_form(scaled)
    pulled = {"alpha^2": 4 * q["alpha^2"], "alpha*beta": 2 * q["alpha*beta"], "beta^2": q["beta^2"]}
    ratio = {k: q2[k] / pulled[k] for k in q2 if pulled[k]}
    assert len(set(ratio.values())) == 1 and next(iter(ratio.values())) != 0
    assert all(q2[k] == 0 for k in q2 if pulled[k] == 0)


@pytest.mark.parametrize("name", ["D1", "D2"])
def test_monotonicity_certificate(name):
    frame = build_adapted_frame(catalog.get(name))
    cert = monotonicity_certificate(frame)
    assert cert == frame.chart.parse("(u4^2 + u5^2)^2")
    assert cert.eval({"u4": 1, "u5": 0}) == Fraction(1)
