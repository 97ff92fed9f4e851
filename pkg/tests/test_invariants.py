from __future__ import annotations

import math
from fractions import Fraction

import pytest

from rank2dist import catalog
from rank2dist.cotangent import FiberForm
from rank2dist.errors import InvalidStyle, SingularBasisChange
from rank2dist.invariants import (
    RHO_SCALE,
    choose_eps1,
    classify_form,
    covariance_check,
    default_samples,
    invariants,
    run_pipeline,
    solve_A0A1,
    tangential_form,
)
from rank2dist.manifold import build_adapted_frame


@pytest.fixture(scope="module")
def d2_frame():
    return build_adapted_frame(catalog.d2())


def test_eps1_styles(d2_frame):
    chart = d2_frame.chart
    u4, u5 = chart.u(3), chart.u(4)
    inv = choose_eps1(d2_frame, "inv_u5")
    assert inv.gamma4 == 1 / u5 and inv.gamma5.is_zero() and inv.constant == chart.one()
    polar = choose_eps1(d2_frame, "polar_minus")
    assert polar.constant == chart.one()
    assert polar.gamma4 == u5 / (u4 * u4 + u5 * u5)
    custom = choose_eps1(d2_frame, "custom", ("u5", "-u4"))
    assert custom.constant == u4 * u4 + u5 * u5


def test_custom_style_needs_a_first_integral(d2_frame):
    with pytest.raises(InvalidStyle):
        choose_eps1(d2_frame, "custom", ("x1*u5", "-x1*u4"))
    with pytest.raises(InvalidStyle):
        choose_eps1(d2_frame, "sideways")


def test_nilpotent_coefficients_vanish():
    frame = build_adapted_frame(catalog.d1())
    dec = solve_A0A1(frame, choose_eps1(frame, "polar_minus"))
    assert dec.a0.is_zero() and dec.a1.is_zero() and dec.residual.is_zero()


def test_rolling_coefficients():
    # on u4^2 + u5^2 = 1 the theta-rotation satisfies (ad h)^4 = A0 + A1 (ad h)^2
    r, rh = Fraction(1), Fraction(2)
    frame = build_adapted_frame(catalog.rolling(r, rh))
    dec = solve_A0A1(frame, choose_eps1(frame, "polar_minus"))
    chart = frame.chart
    radius2 = chart.parse("u4^2 + u5^2")
    assert dec.a0 == radius2 * radius2 * (-1 / (r * r * rh * rh))
    assert dec.a1 == radius2 * -(1 / (r * r) + 1 / (rh * rh))
    assert dec.residual.is_zero()


def test_constant_rescaling_of_eps1(d2_frame):
    base = solve_A0A1(d2_frame, choose_eps1(d2_frame, "inv_u5"))
    scaled = solve_A0A1(d2_frame, choose_eps1(d2_frame, "custom", ("2/u5", "0")))
    assert (base.a0, base.a1) == (scaled.a0, scaled.a1)


@pytest.mark.parametrize(
    "name, square, tag",
    [
        ("D2", "(u4^2 + u5^2)^2", "plus-square-definite"),
        ("D3h", "(u4^2 - u5^2)^2", "square-indefinite"),
        ("D3e", "(u4^2 + u5^2)^2", "plus-square-definite"),
    ],
)
def test_fundamental_forms(name, square, tag):
    frame = build_adapted_frame(catalog.get(name))
    report = run_pipeline(frame)
    ratio = report.form.ratio_to(FiberForm.from_expr(frame.chart.parse(square), frame.chart.fiber[3:5]))
    assert ratio is not None and ratio > 0
    assert report.tag == tag


@pytest.mark.parametrize("rh", [2, 3, 4, 5])
def test_rolling_sign(rh):
    r = 1
    frame = build_adapted_frame(catalog.rolling(r, rh))
    form = run_pipeline(frame).form
    sign = (9 * rh * rh - r * r) * (rh * rh - 9 * r * r)
    if sign == 0:
        assert form.is_zero()
    else:
        value = form.expr.eval({"u4": 1, "u5": 0})
        assert (value > 0) == (sign > 0)


def test_tangential_form(d2_frame):
    form = run_pipeline(d2_frame).form
    q = d2_frame.base_point
    assert tangential_form(form, q, Fraction(1), Fraction(0)) == form.expr.eval({"u4": 0, "u5": -1})
    assert tangential_form(form, q, Fraction(0), Fraction(0)) == 0
    v = tangential_form(form, q, Fraction(1, 3), Fraction(2))
    assert tangential_form(form, q, Fraction(2, 3), Fraction(4)) == 16 * v


def test_projective_ricci_d2():
    report = invariants(catalog.d2(), samples=5)
    assert len(report.rho_samples) == 5
    for _, value in report.rho_samples:
        assert value == pytest.approx(4 * math.sqrt(35) / 9, abs=1e-10)
    assert RHO_SCALE == pytest.approx(2.6293687924887, abs=1e-12)


def test_rolling_ricci_value():
    r, rh = 1, 5
    frame = build_adapted_frame(catalog.rolling(r, rh))
    report = run_pipeline(frame, samples=default_samples(frame, 3, seed=1))
    expected = (4 * math.sqrt(35) / 3) * 26 / math.sqrt(224 * 16)
    for _, value in report.rho_samples:
        assert value == pytest.approx(expected, abs=1e-9)


def test_classification_tags(d2_frame):
    chart = d2_frame.chart
    vars_ = chart.fiber[3:5]
    assert classify_form(FiberForm.from_expr(chart.parse("(u4^2 + u5^2)^2"), vars_)) == "plus-square-definite"
    assert classify_form(FiberForm.from_expr(chart.parse("(u4^2 - u5^2)^2"), vars_)) == "square-indefinite"
    assert classify_form(FiberForm.from_expr(chart.zero(), vars_)) == "zero"
    assert classify_form(FiberForm.from_expr(chart.parse("-(u4^2 + u5^2)^2"), vars_)) == "minus-square-definite"


def test_covariance_simple_cases():
    assert covariance_check(catalog.d2(), [[1, 0], [0, 1]]).holds
    result = covariance_check(catalog.d2(), [[2, 0], [0, 1]])
    assert result.holds
    assert result.transformed.expr != result.original.expr
    with pytest.raises(SingularBasisChange):
        covariance_check(catalog.d2(), [[1, 2], [2, 4]])


def test_report_dictionary(d2_frame):
    doc = run_pipeline(d2_frame, name="D2").to_dict()
    assert doc["classification"] == "plus-square-definite"
    assert doc["residual"] == "0"
    assert set(doc) >= {"A0", "A1", "A", "C", "rho"}
