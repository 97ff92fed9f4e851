"""Command line entry point.

    rank2dist <command> --manifest FILE [--point "u4=1,u5=0"] [--order N]
              [--eps1 STYLE] [--seed S] [--format text|structured]

``--manifest`` also accepts ``catalog:NAME`` as a shorthand for a manifest
containing ``example = "NAME"``.  ``catalog-regression`` ignores the manifest
and replays the golden reports shipped with the package.

Exit codes are those of :mod:`rank2dist.errors` (0 on success).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Sequence

from ..cotangent import (
    deficiency_polynomial,
    fiber_point,
    j_flag,
    weight_jump_locus,
)
from ..errors import (
    BasePointOnD3perp,
    DimensionMismatch,
    InputError,
    Rank2Error,
    RegressionMismatch,
    WrongDimension,
)
from ..grasscurve import cross_check_A, reduced_jacobi_series, weight_jump_report
from ..invariants import default_samples, run_pipeline
from ..manifold import build_adapted_frame, growth_vector, regular_abnormal_check
from ..symbalg.expr import format_rational
from .manifest import CLI_STYLES, Manifest, parse_manifest, parse_point
from .report import num, point_doc, to_structured, to_text

COMMANDS = ("growth", "regular", "invariants", "tangential", "locus", "jacobi-check", "catalog-regression")
DEFAULT_ORDER = 10
DEFAULT_SEED = 0
DEFAULT_STYLE = "inv_u5"
# catalog entries and the commands recorded for them in the goldens
GOLDEN_PLAN: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("D0(5)", ("growth", "invariants")),
    ("D1", ("growth", "invariants")),
    ("D2", ("growth", "invariants")),
    ("D3h", ("growth", "invariants")),
    ("D3e", ("growth", "invariants")),
    ("rolling(1,2)", ("growth", "invariants")),
    ("rolling(1,3)", ("growth", "invariants")),
    ("Dtilde", ("growth", "locus")),
    ("Dbar(6)", ("growth", "locus")),
)


class Settings:
    def __init__(self, manifest: Manifest, points: Sequence[str], order: int | None, eps1: str | None, seed: int | None):
        opts = manifest.options
        self.manifest = manifest
        self.order = order if order is not None else (opts.order or DEFAULT_ORDER)
        self.style = eps1 if eps1 is not None else (opts.eps1 or DEFAULT_STYLE)
        self.seed = seed if seed is not None else (opts.seed if opts.seed is not None else DEFAULT_SEED)
        chart = manifest.spec.chart
        self.points = [parse_point(p, chart) for p in (list(points) or opts.points)]


# -- helpers ------------------------------------------------------------------------------------

def _base(settings: Settings, frame=None) -> dict[str, Fraction]:
    """Base point of the manifest, overridden by any x-coordinates given with --point."""
    spec = settings.manifest.spec
    q = dict(spec.base_point) if spec.base_point is not None else {}
    chart = spec.chart
    for p in settings.points:
        for k, v in p.items():
            if k in chart.base or k in chart.aux:
                q[k] = v
    if not q:
        raise DimensionMismatch("no base point: give one in the manifest or with --point")
    return q


def _covectors(settings: Settings, frame) -> list[dict[str, Fraction]]:
    """Points of (D^2)^perp from --point (u4..un given, x's default to the base point)."""
    q = _base(settings)
    out = []
    for p in settings.points:
        u = {k: v for k, v in p.items() if k in frame.chart.fiber[3:]}
        if not u:
            continue
        base = dict(q)
        base.update({k: v for k, v in p.items() if k in frame.chart.base or k in frame.chart.aux})
        out.append(fiber_point(frame, base, u))
    return out


def _echo(command: str, settings: Settings) -> dict[str, Any]:
    m = settings.manifest
    return {
        "command": command,
        "name": m.spec.name,
        "n": m.n,
        "order": settings.order,
        "eps1": settings.style,
        "seed": settings.seed,
    }


def _with_frame(settings: Settings):
    spec = settings.manifest.spec
    return build_adapted_frame(spec)


# -- commands -----------------------------------------------------------------------------------

def cmd_growth(settings: Settings) -> dict[str, Any]:
    q = _base(settings)
    gv = growth_vector(settings.manifest.spec, q)
    return {**_echo("growth", settings), "point": point_doc(q), "growth": list(gv.dims)}


def cmd_regular(settings: Settings) -> dict[str, Any]:
    q = _base(settings)
    flags = regular_abnormal_check(settings.manifest.spec, q)
    return {**_echo("regular", settings), "point": point_doc(q), **{k: bool(v) for k, v in flags.items()}}


def _pipeline(settings: Settings):
    frame = _with_frame(settings)
    if frame.n != 5:
        raise WrongDimension(f"this command needs n = 5 (got {frame.n}); try 'locus'")
    samples = default_samples(frame, 5, settings.seed) + _covectors(settings, frame)
    report = run_pipeline(frame, settings.style, name=settings.manifest.spec.name, samples=samples)
    return frame, report


def cmd_invariants(settings: Settings) -> dict[str, Any]:
    _, report = _pipeline(settings)
    return {**_echo("invariants", settings), "report": report.to_dict()}


def tangential_coefficients(form, q) -> dict[str, str]:
    """Coefficients of A_q(alpha X1 + beta X2) keyed 'alpha^i*beta^j'; u4 = beta, u5 = -alpha."""
    local = form.at(q)
    out: dict[str, str] = {}
    for exps, coeff in sorted(local.coefficients().items(), key=lambda kv: (-kv[0][1], kv[0][0])):
        a4, a5 = exps[0], exps[1]
        c = Fraction(str(coeff.constant_value())) * (-1) ** int(a5)
        if c:
            out[f"alpha^{a5}*beta^{a4}"] = format_rational(c)
    return out


def cmd_tangential(settings: Settings) -> dict[str, Any]:
    frame, report = _pipeline(settings)
    q = {k: v for k, v in _base(settings).items() if k in frame.chart.base or k in frame.chart.aux}
    return {
        **_echo("tangential", settings),
        "point": point_doc(q),
        "quartic": tangential_coefficients(report.form, q),
        "classification": report.tag,
    }


def cmd_locus(settings: Settings) -> dict[str, Any]:
    spec = settings.manifest.spec
    q = _base(settings)
    frame = _with_frame(settings)
    if frame.n < 6:
        raise WrongDimension("the weight-jump locus is empty for n = 5; use 'invariants'")
    loc = weight_jump_locus(frame, q)
    p = deficiency_polynomial(frame, q, settings.seed)
    return {
        **_echo("locus", settings),
        "point": point_doc(q),
        "growth": list(growth_vector(spec, q).dims),
        "deficiency_degree": int(max((sum(k) for k in p.coefficients()), default=0)),
        "polynomial": loc.polynomial,
        "derivative": loc.derivative,
        "complex_nonempty": loc.complex_nonempty,
        "real_nonempty": loc.real_nonempty,
        "witness": point_doc({k: loc.witness[k] for k in frame.chart.index if k in loc.witness}) if loc.witness else None,
    }


def cmd_jacobi_check(settings: Settings) -> dict[str, Any]:
    frame = _with_frame(settings)
    q = _base(settings)
    if frame.n == 5:
        lams = _covectors(settings, frame) or [
            fiber_point(frame, q, u) for u in ((1, 0), (1, 1), (2, -3))
        ]
        checks = []
        for lam in lams:
            cc = cross_check_A(frame, lam, settings.order, settings.style)
            checks.append(
                {
                    "point": point_doc({k: lam[k] for k in frame.chart.fiber[3:]}),
                    "series": format_rational(cc.series_value),
                    "pipeline": format_rational(cc.pipeline_value),
                    "match": cc.match,
                }
            )
        return {**_echo("jacobi-check", settings), "point": point_doc(q), "checks": checks}
    lams = _covectors(settings, frame)
    if not lams:
        loc = weight_jump_locus(frame, q)
        if loc.witness is None:
            raise BasePointOnD3perp("no rational weight-jump point found; pass one with --point")
        lams = [fiber_point(frame, q, loc.witness)]
    rows = []
    for lam in lams:
        curve = reduced_jacobi_series(frame, lam, max(settings.order, 14))
        jr = weight_jump_report(curve)
        rows.append(
            {
                "point": point_doc({k: lam[k] for k in frame.chart.fiber[3:]}),
                "flag": list(j_flag(frame, lam).dims),
                "weight_at_point": jr.weight_at_zero,
                "weight_nearby": jr.nearby_weight,
                "jump": jr.jump,
                "rho_pole": format_rational(jr.rho_pole_coeff),
                "density_singular": jr.density_is_singular,
                "form_polynomial": not jr.density_is_singular,
            }
        )
    return {**_echo("jacobi-check", settings), "point": point_doc(q), "jumps": rows}


HANDLERS: dict[str, Callable[[Settings], dict[str, Any]]] = {
    "growth": cmd_growth,
    "regular": cmd_regular,
    "invariants": cmd_invariants,
    "tangential": cmd_tangential,
    "locus": cmd_locus,
    "jacobi-check": cmd_jacobi_check,
}


def run_command(manifest: Manifest, command: str, points: Sequence[str] = (), order: int | None = None,
                eps1: str | None = None, seed: int | None = None) -> dict[str, Any]:
    """Run one command and return the report document (without timing)."""
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    return HANDLERS[command](Settings(manifest, points, order, eps1, seed))


# -- goldens ------------------------------------------------------------------------------------

def golden_dir() -> Path:
    return Path(str(resources.files("rank2dist") / "goldens"))


def golden_name(entry: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in entry).strip("_") + ".json"


def golden_document(entry: str, commands: Sequence[str], seed: int = DEFAULT_SEED) -> dict[str, Any]:
    manifest = parse_manifest(f'example = "{entry}"\n')
    return {
        "manifest": f'example = "{entry}"\n',
        "seed": seed,
        "reports": {c: run_command(manifest, c, seed=seed) for c in commands},
    }


def replay(path: Path) -> tuple[bool, str]:
    recorded = path.read_text()
    doc = json.loads(recorded)
    manifest = parse_manifest(doc["manifest"])
    fresh = {
        "manifest": doc["manifest"],
        "seed": doc["seed"],
        "reports": {c: run_command(manifest, c, seed=doc["seed"]) for c in doc["reports"]},
    }
    return to_structured(fresh) == recorded, path.name


def catalog_regression(update: bool = False, directory: Path | None = None, workers: int = 4) -> dict[str, Any]:
    directory = directory or golden_dir()
    if update:
        directory.mkdir(parents=True, exist_ok=True)
        for entry, commands in GOLDEN_PLAN:
            (directory / golden_name(entry)).write_text(to_structured(golden_document(entry, commands)))
    files = sorted(directory.glob("*.json"))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(replay, files))
    return {
        "command": "catalog-regression",
        "entries": [{"file": name, "match": ok} for ok, name in results],
        "all_match": all(ok for ok, _ in results),
    }


# -- entry point --------------------------------------------------------------------------------

def _load_manifest(arg: str) -> Manifest:
    if arg.startswith("catalog:"):
        return parse_manifest(f'example = "{arg[len("catalog:"):]}"\n')
    try:
        text = Path(arg).read_text()
    except OSError as exc:
        raise InputError(f"cannot read manifest {arg}: {exc.strerror}") from None
    return parse_manifest(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rank2dist", description="Invariants of rank-2 distributions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--manifest", help="manifest file, or catalog:NAME")
    p.add_argument("--point", action="append", default=[], help='e.g. "u4=1,u5=0"; repeatable')
    p.add_argument("--order", type=int, help="series truncation order")
    p.add_argument("--eps1", choices=CLI_STYLES, help="normalization style")
    p.add_argument("--seed", type=int, help="seed for randomized specializations")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--update", action="store_true", help="catalog-regression: rewrite the goldens")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    render = to_structured if args.format == "structured" else to_text
    try:
        start = time.perf_counter()
        if args.command == "catalog-regression":
            report = catalog_regression(update=args.update)
        else:
            if not args.manifest:
                raise InputError("--manifest is required")
            manifest = _load_manifest(args.manifest)
            report = run_command(manifest, args.command, args.point, args.order, args.eps1, args.seed)
        report["seconds"] = num(time.perf_counter() - start)
        sys.stdout.write(render(report))
        if args.command == "catalog-regression" and not report["all_match"]:
            raise RegressionMismatch("golden reports differ: " + ", ".join(
                e["file"] for e in report["entries"] if not e["match"]))
        return 0
    except Rank2Error as exc:
        sys.stderr.write(f"rank2dist: error: {exc}\n")
        return exc.exit_code
    except Exception as exc:  # pragma: no cover
        sys.stderr.write(f"rank2dist: internal error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
