from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp

from rank2dist import catalog
from rank2dist.errors import ChartMismatch
from rank2dist.manifold import (
    DistributionSpec,
    VField,
    build_adapted_frame,
    growth_vector,
    lie_bracket,
    regular_abnormal_check,
    tangent_flag_dims,
)
from rank2dist.symbalg import Chart


def test_bracket_of_coordinate_fields():
    chart = Chart(["x1", "x2"])
    d1 = VField.coordinate(chart, 0)
    x1d2 = VField(chart, [0, chart.x(0)])
    assert lie_bracket(d1, x1d2) == VField.coordinate(chart, 1)
    assert lie_bracket(x1d2, x1d2).is_zero()


def test_d0_bracket_against_sympy():
    d = catalog.d0(5)
    ours = lie_bracket(d.x2, lie_bracket(d.x1, d.x2))
    xs = sp.symbols("x1:6")
    x1 = [1, 0, 0, 0, 0]
    x2 = [0, 1, xs[0], xs[0] ** 2 / 2, xs[0] * xs[1]]

    def bracket(a, b):
        return [sp.expand(sum(a[j] * sp.diff(b[i], xs[j]) - b[j] * sp.diff(a[i], xs[j]) for j in range(5))) for i in range(5)]

    expected = bracket(x2, bracket(x1, x2))
    assert expected == [0, 0, 0, 0, 1]
    assert ours == VField.coordinate(d.chart, 4)


def test_nilpotent_frame_structure_constants():
    f = build_adapted_frame(catalog.d1())
    assert f.c(2, 1, 3) == f.chart.one()
    assert f.c(3, 1, 4) == f.chart.one()
    assert f.has_constant_structure()


def test_so3_frame_is_strongly_adapted():
    f = build_adapted_frame(catalog.d2())
    assert f.strongly_adapted
    assert f.has_constant_structure()


def test_rolling_third_field():
    d = catalog.rolling(1, 2)
    f = build_adapted_frame(d)
    chart = d.chart
    cot_phi = chart.sym("gp")
    expected = f.fields[1].scale(-cot_phi) + VField.coordinate(chart, chart.index["beta"]).scale(Fraction(1, 4) - 1)
    assert f.fields[2] == expected


@pytest.mark.parametrize("name, dims", [("D0(5)", (2, 3, 5)), ("D1", (2, 3, 5)), ("D2", (2, 3, 5)), ("Dtilde", (2, 3, 5, 6))])
def test_growth_vectors(name, dims):
    assert tuple(growth_vector(catalog.get(name)).dims[: len(dims)]) == dims


def test_equal_radii_rolling_is_integrable():
    d = catalog.rolling(1, 1)
    assert set(growth_vector(d).dims) == {2}
    assert not regular_abnormal_check(d)["regular"]


def test_tangent_flags():
    assert tangent_flag_dims(catalog.d0(5)).dims[1:3] == (3, 4)
    n = 6
    dims = tangent_flag_dims(catalog.dbar(n)).dims
    assert dims[n - 4] == dims[n - 3] == n - 2
    assert dims[n - 2] == n - 1


def test_dependent_generators_are_flagged():
    chart = Chart(["x1", "x2", "x3"])
    x = VField.coordinate(chart, 0)
    d = DistributionSpec(chart, x, x.scale(2), {"x1": 0, "x2": 0, "x3": 0})
    assert tangent_flag_dims(d).degenerate


def test_regularity_flags():
    assert regular_abnormal_check(catalog.d0(5)) == {"constant_weight": True, "corank1": True, "regular": True}
    flags = regular_abnormal_check(catalog.dtilde())
    assert flags["regular"] and flags["corank1"] and not flags["constant_weight"]


def test_chart_mismatch():
    a = VField.coordinate(Chart(["x1", "x2"]), 0)
    b = VField.coordinate(Chart(["y1", "y2"]), 0)
    with pytest.raises(ChartMismatch):
        lie_bracket(a, b)
