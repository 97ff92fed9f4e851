"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (with wall time) through the ``acceptance``
fixture; the lines are repeated in the terminal summary.  Sub-claims that the
implementation shows to be unattainable are separate strict xfail tests and
are reported as expected FAIL lines.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from rank2dist import catalog
from rank2dist.cotangent import (
    FiberForm,
    alpha6,
    deficiency_polynomial,
    fiber_point,
    monotonicity_certificate,
    weight_jump_locus,
)
from rank2dist.grasscurve import (
    MatCurve,
    canonical_basis_m2,
    cross_check_A,
    cross_ratio_trace_check,
    curve_invariants,
    jump_asymptotics,
    jump_one_search,
    reduced_jacobi_series,
    structural_eq_check,
    weight_jump_report,
    weight_rank,
)
from rank2dist.invariants import covariance_check, default_samples, run_pipeline
from rank2dist.manifold import build_adapted_frame, growth_vector

RHO = 4 * math.sqrt(35) / 9
STYLES = ("inv_u5", "inv_u4", "polar_minus", "polar_plus")


def _square(frame, text: str) -> FiberForm:
    return FiberForm.from_expr(frame.chart.parse(text), frame.chart.fiber[3:5])


def _positive_multiple(form: FiberForm, frame, text: str) -> bool:
    ratio = form.ratio_to(_square(frame, text))
    return ratio is not None and ratio > 0


def _rho_at(frame, report, u4, u5) -> float:
    return report.rho(fiber_point(frame, frame.base_point, (u4, u5)))


def _dtilde_jump():
    frame = build_adapted_frame(catalog.dtilde())
    loc = weight_jump_locus(frame)
    lam = fiber_point(frame, frame.base_point, loc.witness)
    return frame, loc, weight_jump_report(reduced_jacobi_series(frame, lam, 14))


def test_criterion_01_nilpotent_form_vanishes(acceptance):
    with acceptance.check(1, "D1 fundamental form is exactly zero", limit=5):
        frame = build_adapted_frame(catalog.d1())
        report = run_pipeline(frame)
        assert report.form.expr.is_zero()
        assert str(report.form.expr) == "0"


def test_criterion_02_so3(acceptance):
    with acceptance.check(2, "D2 form and projective Ricci", limit=30):
        frame = build_adapted_frame(catalog.d2())
        report = run_pipeline(frame, samples=default_samples(frame, 6, seed=2))
        assert _positive_multiple(report.form, frame, "(u4^2 + u5^2)^2")
        assert len(report.rho_samples) >= 5
        for _, value in report.rho_samples:
            assert abs(value - RHO) < 1e-10


def test_criterion_03_sl2(acceptance):
    with acceptance.check(3, "D3h/D3e forms, |rho|, D3e sign"):
        fh = build_adapted_frame(catalog.d3h())
        fe = build_adapted_frame(catalog.d3e())
        rh = run_pipeline(fh)
        re_ = run_pipeline(fe, samples=default_samples(fe, 5, seed=3))
        assert _positive_multiple(rh.form, fh, "(u4^2 - u5^2)^2")
        assert _positive_multiple(re_.form, fe, "(u4^2 + u5^2)^2")
        for _, value in re_.rho_samples:
            assert abs(value + RHO) < 1e-10
        r10, r01 = _rho_at(fh, rh, 1, 0), _rho_at(fh, rh, 0, 1)
        assert abs(abs(r10) - RHO) < 1e-10 and abs(abs(r01) - RHO) < 1e-10
        assert r10 * r01 < 0


@pytest.mark.xfail(strict=True, reason="ledgered: D3h rho signs come out opposite to the stated ones")
def test_criterion_03_d3h_rho_signs(acceptance):
    frame = build_adapted_frame(catalog.d3h())
    report = run_pipeline(frame)
    r10, r01 = _rho_at(frame, report, 1, 0), _rho_at(frame, report, 0, 1)
    acceptance.expected_failure(3, "D3h rho sign at (1,0) and (0,1)", f"got {r10:+.12f}, {r01:+.12f}")
    assert abs(r10 + RHO) < 1e-10 and abs(r01 - RHO) < 1e-10


@pytest.mark.parametrize("r, rh", [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3)])
def test_criterion_04_rolling(acceptance, r, rh):
    with acceptance.check(4, f"rolling spheres ({r},{rh})", limit=120):
        frame = build_adapted_frame(catalog.rolling(r, rh))
        report = run_pipeline(frame, samples=default_samples(frame, 5, seed=4))
        sign = (9 * rh * rh - r * r) * (rh * rh - 9 * r * r)
        if sign == 0:
            assert report.form.expr.is_zero()
            assert report.tag == "zero"
            return
        tag = "plus-square-definite" if sign > 0 else "minus-square-definite"
        assert report.tag == tag
        assert (report.form.expr.eval({"u4": 1, "u5": 0}) > 0) == (sign > 0)
        expected = (4 * math.sqrt(35) / 3) * (r * r + rh * rh) / math.sqrt(abs(sign))
        assert report.rho_samples
        for _, value in report.rho_samples:
            assert abs(value - expected) < 1e-9


def _random_nu(rng: random.Random, coords) -> list[list[str]]:
    """2x2 polynomial matrix, invertible at 0, with at most two non-constant entries."""
    while True:
        const = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if const[0][0] * const[1][1] - const[0][1] * const[1][0] == 0:
            continue
        entries = [[str(c) for c in row] for row in const]
        for i, j in rng.sample([(0, 0), (0, 1), (1, 0), (1, 1)], 2):
            entries[i][j] += f" + {rng.randint(1, 3)}*{rng.choice(coords[:3])}"
        return entries


@pytest.mark.parametrize("name", ["D0(5)", "D2"])
def test_criterion_05_covariance(acceptance, name):
    with acceptance.check(5, f"covariance A~ = Delta^8 A on {name}"):
        d = catalog.get(name)
        rng = random.Random(5)
        for _ in range(5):
            nu = _random_nu(rng, d.chart.base)
            result = covariance_check(d, nu)
            assert result.delta.eval(d.point()) != 0
            assert result.holds, nu


@pytest.mark.parametrize("name", ["D2", "D3h"])
def test_criterion_06_eps1_independence(acceptance, name):
    with acceptance.check(6, f"eps1 independence on {name}"):
        frame = build_adapted_frame(catalog.get(name))
        reports = [run_pipeline(frame, style) for style in STYLES]
        for report in reports:
            assert report.residual.is_zero()
        for report in reports[1:]:
            ratio = report.form.ratio_to(reports[0].form)
            assert ratio is not None and ratio > 0


@pytest.mark.parametrize("name", ["D1", "D2", "D3h", "D3e", "D0(5)"])
def test_criterion_07_oracle_equivalence(acceptance, name):
    with acceptance.check(7, f"series oracle vs pipeline on {name}"):
        frame = build_adapted_frame(catalog.get(name))
        for u in ((1, 0), (1, 1), (2, -3)):
            cc = cross_check_A(frame, fiber_point(frame, frame.base_point, u), order=10)
            assert cc.match, (u, cc)


def _random_curve(rng: random.Random) -> MatCurve:
    while True:
        a, c = (Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(2))
        b = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if a * c - b * b > 0:
            break

    def tail():
        return [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(4)]

    s12 = [0, b] + tail()
    return MatCurve.from_rows([[[0, a] + tail(), s12], [s12, [0, c] + tail()]], 10)


def test_criterion_08_grassmannian_suite(acceptance):
    with acceptance.check(8, "Grassmannian curve suite"):
        flat = MatCurve.from_rows(
            [[[0, 1], [0, 0, Fraction(1, 2)]], [[0, 0, Fraction(1, 2)], [0, 0, 0, Fraction(1, 3)]]], 12
        )
        assert weight_rank(flat) == (4, 1)
        rho, dens = curve_invariants(flat)
        assert rho.is_zero() and dens.is_zero()

        parabola = MatCurve.from_rows([[[0, 0, 1]]], 12)
        assert jump_asymptotics(parabola).rho_pole_coeff == Fraction(-1, 4)

        _, _, jump_curve = jump_one_search()
        report = jump_asymptotics(jump_curve)
        k = report.nearby_weight
        assert k == 4 and report.weight_at_zero == k + 1
        assert report.a_pole_coeff == Fraction(3 * (k - 1), 80 * k) == Fraction(9, 320)

        rng = random.Random(8)
        for _ in range(10):
            assert cross_ratio_trace_check(_random_curve(rng), 8).is_zero()


def test_criterion_09_structural_equation(acceptance):
    with acceptance.check(9, "structural equations on D2 Jacobi series"):
        frame = build_adapted_frame(catalog.d2())
        lam = fiber_point(frame, frame.base_point, (1, 0))
        canonical = canonical_basis_m2(reduced_jacobi_series(frame, lam, 14))
        residual = structural_eq_check(canonical)
        assert residual.vanishes()
        assert residual.min_order() >= 6
        assert residual.normalization.is_zero()
        assert residual.normalization.prec is None or residual.normalization.prec > 0


def test_criterion_10_six_dimensional(acceptance):
    with acceptance.check(10, "Dtilde growth, P_D, locus, nonpolynomial A"):
        d = catalog.dtilde()
        assert tuple(growth_vector(d).dims[:4]) == (2, 3, 5, 6)
        frame, loc, report = _dtilde_jump()
        p = deficiency_polynomial(frame)
        assert p.expr == alpha6(frame)
        assert max(sum(k) for k in p.coefficients()) == 2
        assert loc.complex_nonempty
        assert report.nearby_weight == 9
        assert report.weight_at_zero > report.nearby_weight
        assert report.density_is_singular


@pytest.mark.xfail(strict=True, reason="ledgered: the jump point has weight 11 (jump two), not 10")
def test_criterion_10_weight_ten_at_jump(acceptance):
    _, _, report = _dtilde_jump()
    acceptance.expected_failure(
        10, "Dtilde weight 10 vs 9 at the jump point", f"weight {report.weight_at_zero} vs {report.nearby_weight}"
    )
    assert report.weight_at_zero == 10


@pytest.mark.parametrize("name", ["D0(5)", "D1", "D2", "D3h", "D3e", "rolling(1,2)", "rolling(1,3)"])
def test_criterion_11_monotonicity(acceptance, name):
    with acceptance.check(11, f"monotonicity certificate on {name}"):
        frame = build_adapted_frame(catalog.get(name))
        assert monotonicity_certificate(frame) == frame.chart.parse("(u4^2 + u5^2)^2")
