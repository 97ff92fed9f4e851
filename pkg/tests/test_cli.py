from __future__ import annotations

import importlib
import json
import math
from pathlib import Path

import pytest

from rank2dist.cli import main, parse_manifest, run_command, serialize
from rank2dist.cli.main import GOLDEN_PLAN, catalog_regression, golden_dir, golden_name
from rank2dist.errors import DimensionMismatch, InvalidStyle, ParseError, UnknownSymbol

D0_INLINE = """
name = "D0(5)"
coordinates = ["x1", "x2", "x3", "x4", "x5"]
X1 = ["1", "0", "0", "0", "0"]
X2 = ["0", "1", "x1", "x1^2/2", "x1*x2"]
base_point = { x1 = "0", x2 = "0", x3 = "0", x4 = "0", x5 = "0" }

[options]
order = 8
points = ["u4=1,u5=0"]
"""


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_reference():
    m = parse_manifest('example = "D2"\n')
    assert m.spec.name == "D2" and m.n == 5


def test_inline_manifest():
    m = parse_manifest(D0_INLINE)
    chart = m.spec.chart
    assert m.spec.x2.coeffs[4] == chart.parse("x1*x2")
    assert m.options.order == 8
    assert serialize(parse_manifest(serialize(m))) == serialize(m)


@pytest.mark.parametrize(
    "text, error",
    [
        (D0_INLINE.replace('"x1^2/2"', '"x1^-2"'), ParseError),
        (D0_INLINE.replace('"x1*x2"]', '"x1*x2", "0"]'), DimensionMismatch),
        (D0_INLINE.replace('"x1*x2"', '"x1*y7"'), UnknownSymbol),
        ('example = "D9"\n', UnknownSymbol),
        ("example = \n", ParseError),
        ('example = "D2"\n[options]\neps1 = "sideways"\n', InvalidStyle),
    ],
)
def test_manifest_errors(text, error):
    with pytest.raises(error):
        parse_manifest(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_manifest('example = "D2"\norder = = 3\n')
    assert info.value.line == 2


def test_invariants_on_d2():
    report = run_command(parse_manifest('example = "D2"\n'), "invariants")["report"]
    assert report["classification"] == "plus-square-definite"
    assert report["A"] == "9/3500*u4^4 + 9/1750*u4^2*u5^2 + 9/3500*u5^4"
    for sample in report["rho"]:
        assert sample["value"] == pytest.approx(4 * math.sqrt(35) / 9, abs=1e-10)


def test_locus_on_dtilde():
    report = run_command(parse_manifest('example = "Dtilde"\n'), "locus")
    assert report["complex_nonempty"] is True
    assert report["growth"] == [2, 3, 5, 6]
    assert report["deficiency_degree"] == 2


def test_growth_and_regular_on_inline_manifest():
    m = parse_manifest(D0_INLINE)
    assert run_command(m, "growth")["growth"] == [2, 3, 5]
    assert run_command(m, "regular")["regular"] is True


def test_tangential_quartic():
    report = run_command(parse_manifest('example = "D3h"\n'), "tangential")
    assert report["quartic"] == {"alpha^4*beta^0": "9/3500", "alpha^2*beta^2": "-9/1750", "alpha^0*beta^4": "9/3500"}


def test_jacobi_check_uses_points():
    report = run_command(parse_manifest('example = "D2"\n'), "jacobi-check", points=["u4=2,u5=-3"])
    assert [c["match"] for c in report["checks"]] == [True]
    assert report["checks"][0]["series"] == "1521/3500"


def test_cli_text_and_structured(capsys):
    code, out, _ = _run(capsys, "growth", "--manifest", "catalog:D1")
    assert code == 0 and "growth: (2, 3, 5)" in out
    code, out, _ = _run(capsys, "growth", "--manifest", "catalog:D1", "--format", "structured")
    assert code == 0 and json.loads(out)["growth"] == [2, 3, 5]


def test_cli_reads_manifest_files(tmp_path: Path, capsys):
    path = tmp_path / "d0.toml"
    path.write_text(D0_INLINE)
    code, out, _ = _run(capsys, "invariants", "--manifest", str(path), "--format", "structured", "--eps1", "polar_minus")
    doc = json.loads(out)
    assert code == 0
    assert doc["eps1"] == "polar_minus" and doc["report"]["A"] == "0"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["growth", "--manifest", "catalog:Nope"], 2),
        (["growth"], 2),
        (["growth", "--manifest", "/nonexistent/manifest.toml"], 2),
        (["locus", "--manifest", "catalog:D2"], 4),
        (["invariants", "--manifest", "catalog:Dtilde"], 4),
        (["invariants", "--manifest", "catalog:D2", "--point", "u4=0,u5=0"], 4),
        (["invariants", "--manifest", "catalog:D2", "--point", "u9=1"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, _, err = _run(capsys, *argv)
    assert got == code
    assert err.startswith("rank2dist: error:")


def test_goldens_replay_byte_identically():
    report = catalog_regression()
    assert report["all_match"]
    assert len(report["entries"]) == len(GOLDEN_PLAN)


def test_golden_files_have_no_timing():
    for entry, _ in GOLDEN_PLAN:
        text = (golden_dir() / golden_name(entry)).read_text()
        assert "seconds" not in text


def test_regression_detects_drift(tmp_path: Path, capsys):
    src = golden_dir() / golden_name("D2")
    doc = json.loads(src.read_text())
    doc["reports"]["growth"]["growth"] = [2, 3, 4]
    (tmp_path / "D2.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    report = catalog_regression(directory=tmp_path)
    assert not report["all_match"]


def test_regression_update_writes_goldens(tmp_path: Path):
    report = catalog_regression(update=True, directory=tmp_path)
    assert report["all_match"]
    for entry, _ in GOLDEN_PLAN:
        assert (tmp_path / golden_name(entry)).read_text() == (golden_dir() / golden_name(entry)).read_text()


def test_regression_mismatch_exit_code(tmp_path: Path, monkeypatch, capsys):
    cli_main = importlib.import_module("rank2dist.cli.main")
    src = golden_dir() / golden_name("D1")
    (tmp_path / "D1.json").write_text(src.read_text().replace('"D1"', '"D1 "', 1))
    monkeypatch.setattr(cli_main, "golden_dir", lambda: tmp_path)
    code, _, err = _run(capsys, "catalog-regression")
    assert code == 7 and "D1.json" in err
