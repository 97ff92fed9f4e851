from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp

from rank2dist import catalog
from rank2dist.cotangent import fiber_point, j_flag
from rank2dist.errors import NotJumpOne
from rank2dist.grasscurve import (
    MatCurve,
    canonical_basis_m2,
    cross_check_A,
    cross_ratio_trace_check,
    curve_invariants,
    generating_jets,
    generic_weight,
    jump_asymptotics,
    jump_one_search,
    laurent_agrees,
    mobius,
    reduced_jacobi_series,
    reparametrization_check,
    sbar,
    schwarzian,
    structural_eq_check,
    w_laurent,
    weight_jump_report,
    weight_rank,
)
from rank2dist.manifold import build_adapted_frame
from rank2dist.symbalg.series import Series1

ORDER = 12
FLAT = MatCurve.from_rows([[[0, 1], [0, 0, Fraction(1, 2)]], [[0, 0, Fraction(1, 2)], [0, 0, 0, Fraction(1, 3)]]], ORDER)
LINE = MatCurve.from_rows([[[0, 1]]], ORDER)
PARABOLA = MatCurve.from_rows([[[0, 0, 1]]], ORDER)


@pytest.fixture(scope="module")
def d2_frame():
    return build_adapted_frame(catalog.d2())


def test_weights():
    assert weight_rank(LINE) == (1, 1)
    assert weight_rank(FLAT) == (4, 1)
    assert weight_rank(PARABOLA) == (2, 1)
    assert generic_weight(PARABOLA) == 1


def test_flat_determinant_against_sympy():
    t = sp.Symbol("t")
    m = sp.Matrix([[t, t**2 / 2], [t**2 / 2, t**3 / 3]])
    assert sp.expand(m.det()) == t**4 / 12


def test_generating_function_vanishes_on_model_curves():
    assert generating_jets(LINE).g.is_zero()
    assert generating_jets(FLAT).g.is_zero()
    rho, dens = curve_invariants(FLAT)
    assert rho.is_zero() and dens.is_zero()


def test_trace_identity_on_model_curves():
    assert cross_ratio_trace_check(LINE).is_zero()
    assert cross_ratio_trace_check(FLAT).is_zero()


def test_parabola_jump():
    report = jump_asymptotics(PARABOLA)
    assert report.jump == 1
    assert report.rho_pole_coeff == Fraction(-1, 4)
    assert report.density.is_zero()


def test_constant_weight_is_not_a_jump():
    with pytest.raises(NotJumpOne):
        jump_asymptotics(FLAT)


def test_brute_force_jump_one_curve():
    u, v, curve = jump_one_search()
    report = jump_asymptotics(curve)
    assert (report.weight_at_zero, report.nearby_weight) == (5, 4)
    assert report.a_pole_coeff == report.predicted_a_pole == Fraction(3 * 3, 80 * 4)
    assert report.rho_pole_coeff == Fraction(-1, 4)
    assert report.factorizes


def test_flat_canonical_frame():
    frame = canonical_basis_m2(FLAT)
    assert laurent_agrees(frame, w_laurent(FLAT))
    e1 = frame.e1t
    assert frame.scale2 * sbar([c.diff().diff() for c in e1], [c.diff() for c in e1]).coeff(0) == 36
    assert structural_eq_check(frame).vanishes()
    # e1(0) lies in the skew complement of the first osculating space
    vel = [[e.coeff(0) for e in row] for row in FLAT.derivative().rows()]
    x0 = [c.coeff(0) for c in e1[:2]]
    assert [sum(vel[i][j] * x0[j] for j in range(2)) for i in range(2)] == [0, 0]


def test_sign_flip_keeps_structure():
    frame = canonical_basis_m2(FLAT)
    flipped = type(frame)(
        [-c for c in frame.e1t], [-c for c in frame.e2t], [-c for c in frame.f1t], [-c for c in frame.f2t],
        frame.scale2, frame.rho, frame.density,
    )
    assert structural_eq_check(flipped).vanishes()


def test_reparametrization():
    t = Series1.var(ORDER)
    assert schwarzian(t).is_zero()
    assert reparametrization_check(FLAT, t).vanishes()
    assert schwarzian(mobius(2, 0, 1, 3, ORDER)).is_zero()
    cubic = t * 2 + t * t * Fraction(1, 3) - t * t * t
    assert reparametrization_check(FLAT, cubic).vanishes()
    curve = MatCurve.from_rows([[[0, 1, 1], [0, 0, 1]], [[0, 0, 1], [0, 2, 0, 1]]], ORDER)
    assert reparametrization_check(curve, cubic).vanishes()


def test_text_round_trip():
    for curve in (FLAT, PARABOLA, jump_one_search()[2]):
        text = curve.to_text()
        assert MatCurve.from_text(text).to_text() == text


def test_d2_reduced_jacobi_weight(d2_frame):
    lam = fiber_point(d2_frame, d2_frame.base_point, (1, 0))
    assert weight_rank(reduced_jacobi_series(d2_frame, lam, 10)) == (4, 1)


@pytest.mark.parametrize("name", ["D0(5)", "D1", "D2", "D3h", "D3e"])
def test_velocity_is_rank_one_and_nonnegative(name):
    frame = build_adapted_frame(catalog.get(name))
    for u in ((1, 0), (1, 2)):
        curve = reduced_jacobi_series(frame, fiber_point(frame, frame.base_point, u), 6)
        v0 = curve.derivative().coefficient(0)
        assert v0[0][0] * v0[1][1] == v0[0][1] * v0[1][0]
        assert v0[0][0] >= 0 and v0[1][1] >= 0 and v0[0][0] + v0[1][1] > 0


@pytest.mark.parametrize(
    "name, u, zero",
    [("D1", (1, 0), True), ("D2", (1, 0), False), ("D3h", (1, 1), True)],
)
def test_cross_check(name, u, zero):
    frame = build_adapted_frame(catalog.get(name))
    cc = cross_check_A(frame, fiber_point(frame, frame.base_point, u))
    assert cc.match
    assert (cc.series_value == 0) == zero


def test_dtilde_jump_point():
    frame = build_adapted_frame(catalog.dtilde())
    lam = fiber_point(frame, frame.base_point, {"u5": 1})
    report = weight_jump_report(reduced_jacobi_series(frame, lam, 14))
    assert report.nearby_weight == 9
    assert report.weight_at_zero == 11
    assert report.rho_pole_coeff == Fraction(-18, 35)
    assert report.density_is_singular
    assert tuple(j_flag(frame, lam, imax=6).dims) == (5, 6, 7, 7, 8, 8, 8)
    regular = fiber_point(frame, frame.base_point, {"u4": 1, "u5": 1})
    assert weight_rank(reduced_jacobi_series(frame, regular, 14))[0] == 9
