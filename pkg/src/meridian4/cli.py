"""Command-line front end: build surfaces from JSON configs, sweep grids,
verify family properties, and check natural-PDE residuals.

Exit codes are a stable contract: 0 success/pass, 1 property or residual
failure, 2 config validation error, 3 numeric or domain failure.

A surface config looks like::

    {
      "family": {"tag": "CMC", "a": 1.0, "kappa": 1.0, "c": 1.0, "f0": 1.0,
                 "u_min": 0.0, "u_max": 1.0, "h": 0.001},
      "directrix": {"kind": "latitude", "kappa": 1.0},
      "grid": {"u_min": 0.0, "u_max": 1.0, "nu": 50,
               "v_min": 0.0, "v_max": 6.2832, "nv": 50},
      "tol": 1e-6,
      "format": "csv",
      "out": "out"
    }

and a PDE config like::

    {
      "system": "syst1",
      "solution": "example1",
      "kappa": "sin-offset:2",
      "epsilon": -1,
      "grid": {"u_min": -0.9, "u_max": 2.9, "nu": 40,
               "v_min": 0.0, "v_max": 6.2832, "nv": 40},
      "tol": 1e-8
    }

``directrix.kind`` is one of great | latitude | curvature; the kappa
selectors are "const:k", "sin-offset:c", "poly:c0,c1,...".  Solution
selectors: example1, example2, family(a,b), separable.  CSV columns are
fixed: u, v, x1..x4, E, F, G, K, Kperp, h1, h2, Hnormsq, then the two
causal flags.  OBJ output carries vertices and grid quads only (no
materials), axes mapped y-up as (x1, x4, x2); the e3 component is a
projection casualty.  The MERIDIAN_THREADS environment variable caps
worker parallelism; the sweeps here are vectorized single-process, so
any cap is respected and echoed into reports.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import acceptance
from .diffkit import SmoothFn1, constant_fn, poly_fn, sin_offset_fn
from .errors import MeridianError
from .families import FamilySpec, build_profile, verify_family
from .geometry import MeridianSurface, curve_from_curvature, great_circle, latitude_circle
from .grids import Grid2
from .minkowski import inner_arrays
from .natural_pde import (
    IsotropicChart,
    ScalarField2,
    geometric_functions,
    residual_degenerate,
    residual_fund,
    residual_syst1,
    solution_family,
    transported_solution_family,
)

CSV_COLUMNS = ["u", "v", "x1", "x2", "x3", "x4", "E", "F", "G", "K",
               "Kperp", "h1", "h2", "Hnormsq", "causal_zu", "causal_zv"]

GEOMFUNC_COLUMNS = ["u", "v", "gamma1", "gamma2", "nu", "lambda1", "mu1",
                    "lambda2", "mu2", "beta1", "beta2"]


class ConfigError(Exception):
    pass


def thread_cap() -> int:
    raw = os.environ.get("MERIDIAN_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ConfigError(f"MERIDIAN_THREADS={raw!r} is not an integer")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")


def _parse_kappa(sel: str) -> SmoothFn1:
    kind, _, arg = sel.partition(":")
    try:
        if kind == "const":
            return constant_fn(float(arg))
        if kind == "sin-offset":
            return sin_offset_fn(float(arg))
        if kind == "poly":
            return poly_fn([float(c) for c in arg.split(",")])
    except ValueError as exc:
        raise ConfigError(f"bad kappa selector {sel!r}: {exc}")
    raise ConfigError(f"unknown kappa selector kind {kind!r}")


def _parse_grid(d: dict) -> Grid2:
    try:
        return Grid2.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}")


def _build_directrix(d: dict, grid: Grid2):
    kind = d.get("kind", "great")
    if kind == "great":
        return great_circle()
    if kind == "latitude":
        if "kappa" not in d:
            raise ConfigError("latitude directrix needs a kappa value")
        return latitude_circle(float(d["kappa"]))
    if kind == "curvature":
        if "kappa" not in d:
            raise ConfigError("curvature directrix needs a kappa selector")
        kap = _parse_kappa(str(d["kappa"]))
        pad = 0.05 * (grid.v_max - grid.v_min) + 1e-3
        v0 = float(d.get("v_min", grid.v_min - pad))
        v1 = float(d.get("v_max", grid.v_max + pad))
        return curve_from_curvature(kap, (v0, v1), h=float(d.get("h", 1e-3)))
    raise ConfigError(f"unknown directrix kind {kind!r}")


def _build_surface(cfg: dict) -> tuple:
    if "family" not in cfg or "grid" not in cfg:
        raise ConfigError("config needs 'family' and 'grid' sections")
    try:
        spec = FamilySpec.from_json(cfg["family"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad family spec: {exc}")
    grid = _parse_grid(cfg["grid"])
    if grid.u_min < spec.u_min - 1e-12 or grid.u_max > spec.u_max + 1e-12:
        raise ConfigError(
            f"grid u-range [{grid.u_min}, {grid.u_max}] outside family "
            f"interval [{spec.u_min}, {spec.u_max}]")
    directrix = _build_directrix(cfg.get("directrix", {}), grid)
    surface = MeridianSurface(profile=build_profile(spec),
                              directrix=directrix, name=spec.tag)
    return surface, spec, grid


# ---------------------------------------------------------------------------
# output writers
# ---------------------------------------------------------------------------

def _sweep(surface: MeridianSurface, grid: Grid2) -> dict:
    U, V = grid.mesh()
    d = surface._raw(U, V)
    E = inner_arrays(d["z_u"], d["z_u"])
    F = inner_arrays(d["z_u"], d["z_v"])
    G = inner_arrays(d["z_v"], d["z_v"])
    k = surface.gauss_curvature(U, V)
    kperp = surface.normal_curvature(U, V)
    mc = surface.mean_curvature(U, V)
    h1 = np.broadcast_to(mc.h1, E.shape)
    h2 = np.broadcast_to(mc.h2, E.shape)
    z = np.broadcast_to(d["z"], E.shape + (4,))
    return {
        "U": np.broadcast_to(U, E.shape), "V": np.broadcast_to(V, E.shape),
        "z": z, "E": E, "F": F, "G": G,
        "K": np.broadcast_to(k.frame_route, E.shape), "Kperp": kperp,
        "h1": h1, "h2": h2, "Hnormsq": h1 ** 2 + h2 ** 2,
    }


def _causal_name(q: float, tol: float = 1e-10) -> str:
    if q > tol:
        return "spacelike"
    if q < -tol:
        return "timelike"
    return "lightlike"


def _write_csv(path: Path, sweep: dict):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        nu, nv = sweep["E"].shape
        for i in range(nu):
            for j in range(nv):
                z = sweep["z"][i, j]
                w.writerow([
                    f"{sweep['U'][i, j]:.12g}", f"{sweep['V'][i, j]:.12g}",
                    *(f"{c:.12g}" for c in z),
                    f"{sweep['E'][i, j]:.12g}", f"{sweep['F'][i, j]:.12g}",
                    f"{sweep['G'][i, j]:.12g}", f"{sweep['K'][i, j]:.12g}",
                    f"{sweep['Kperp'][i, j]:.12g}",
                    f"{sweep['h1'][i, j]:.12g}", f"{sweep['h2'][i, j]:.12g}",
                    f"{sweep['Hnormsq'][i, j]:.12g}",
                    _causal_name(sweep["E"][i, j]),
                    _causal_name(sweep["G"][i, j]),
                ])


def _write_obj(path: Path, sweep: dict):
    z = sweep["z"]
    nu, nv = z.shape[:2]
    with open(path, "w") as fh:
        fh.write("# parametric surface export, y-up, vertices + quads\n")
        for i in range(nu):
            for j in range(nv):
                x1, x2, _, x4 = z[i, j]
                fh.write(f"v {x1:.9g} {x4:.9g} {x2:.9g}\n")
        for i in range(nu - 1):
            for j in range(nv - 1):
                a = i * nv + j + 1
                b = (i + 1) * nv + j + 1
                fh.write(f"f {a} {b} {b + 1} {a + 1}\n")


def _write_grid_json(path: Path, sweep: dict, echo: dict):
    payload = {"config": echo, "columns": CSV_COLUMNS[:14],
               "rows": [[float(sweep[k][i, j]) for k in
                         ("U", "V")] + [float(c) for c in sweep["z"][i, j]]
                        + [float(sweep[k][i, j]) for k in
                           ("E", "F", "G", "K", "Kperp", "h1", "h2", "Hnormsq")]
                        for i in range(sweep["E"].shape[0])
                        for j in range(sweep["E"].shape[1])]}
    path.write_text(json.dumps(payload))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_generate(cfg: dict, out_dir: Path) -> int:
    surface, spec, grid = _build_surface(cfg)
    sweep = _sweep(surface, grid)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(out_dir / "surface.csv", sweep)
    _write_obj(out_dir / "surface.obj", sweep)
    report = {
        "config": cfg, "threads": thread_cap(),
        "stopped_reason": surface.profile.stopped_reason,
        "summary": {
            "max_abs_K": float(np.max(np.abs(sweep["K"]))),
            "max_abs_Kperp": float(np.max(np.abs(sweep["Kperp"]))),
            "H_norm_sq_range": [float(np.min(sweep["Hnormsq"])),
                                float(np.max(sweep["Hnormsq"]))],
        },
        "files": ["surface.csv", "surface.obj"],
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2))
    print(json.dumps(report["summary"]))
    return 0


def cmd_export(cfg: dict, out_dir: Path, fmt: str) -> int:
    surface, spec, grid = _build_surface(cfg)
    sweep = _sweep(surface, grid)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "obj":
        _write_obj(out_dir / "surface.obj", sweep)
    elif fmt == "csv":
        _write_csv(out_dir / "surface.csv", sweep)
    elif fmt == "json":
        _write_grid_json(out_dir / "surface.json", sweep, cfg)
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    print(str(out_dir / f"surface.{fmt}"))
    return 0


def cmd_verify(cfg: dict, out_dir: Path | None, tol: float) -> int:
    surface, spec, grid = _build_surface(cfg)
    verdict = verify_family(surface, spec, grid, tol=tol)
    payload = {"config": cfg, "verdict": verdict.to_json()}
    text = json.dumps(payload, indent=2)
    print(text)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "verdict.json").write_text(text)
    return 0 if verdict.passed else 1


def cmd_geomfuncs(cfg: dict, out_dir: Path, fmt: str) -> int:
    surface, spec, grid = _build_surface(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for u in grid.u_points():
        for v in grid.v_points():
            gf = geometric_functions(surface, float(u), float(v))
            rows.append([float(u), float(v), *gf.as_array().tolist()])
    if fmt == "json":
        (out_dir / "geomfuncs.json").write_text(json.dumps(
            {"config": cfg, "columns": GEOMFUNC_COLUMNS, "rows": rows}))
    else:
        with open(out_dir / "geomfuncs.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(GEOMFUNC_COLUMNS)
            for r in rows:
                w.writerow([f"{x:.12g}" for x in r])
    print(str(out_dir / f"geomfuncs.{'json' if fmt == 'json' else 'csv'}"))
    return 0


_FAMILY_RE = re.compile(r"family\(\s*([-0-9.eE+]+)\s*,\s*([-0-9.eE+]+)\s*\)")


def _separable_fields() -> tuple:
    zero = lambda u, v: 0.0 * (np.asarray(u, dtype=float)
                               + np.asarray(v, dtype=float))
    zfield = ScalarField2(zero, zero, zero, zero, zero, zero, name="0")

    def e(u):
        return np.exp(np.asarray(u, dtype=float))

    def q(v):
        return 1.0 + np.asarray(v, dtype=float) ** 2

    mu = ScalarField2(
        value=lambda u, v: e(u) * q(v),
        du=lambda u, v: e(u) * q(v),
        dv=lambda u, v: e(u) * 2.0 * np.asarray(v, dtype=float),
        duu=lambda u, v: e(u) * q(v),
        duv=lambda u, v: e(u) * 2.0 * np.asarray(v, dtype=float),
        dvv=lambda u, v: e(u) * 2.0 + zero(u, v),
        name="separable", audit_box=(0.0, 1.0, 0.0, 1.0))
    return zfield, mu, zfield


def cmd_pde(cfg: dict, out_dir: Path | None, tol: float) -> int:
    system = cfg.get("system")
    if system not in ("fund", "degenerate", "syst1"):
        raise ConfigError(f"unknown system {cfg.get('system')!r}")
    grid = _parse_grid(cfg.get("grid", {}))
    sol = str(cfg.get("solution", ""))
    kappa = _parse_kappa(str(cfg.get("kappa", "const:2")))

    if sol == "separable":
        if system != "degenerate":
            raise ConfigError("the separable built-in is a degenerate-system solution")
        lam, mu, nu = _separable_fields()
        report = residual_degenerate(lam, mu, nu, grid, tol=tol)
    else:
        if sol == "example1":
            a, b = 1.0, 3.0
        elif sol == "example2":
            a, b = 5.0, 0.0
        else:
            match = _FAMILY_RE.fullmatch(sol)
            if not match:
                raise ConfigError(f"unknown solution selector {sol!r}")
            a, b = float(match.group(1)), float(match.group(2))
        lam, mu, nu = solution_family(a, b, kappa)
        if system == "degenerate":
            report = residual_degenerate(lam, mu, nu, grid, tol=tol)
        else:
            spec = FamilySpec("PNMC1", {"a": a, "b": b, "kappa": 2.0},
                              grid.u_min, grid.u_max)
            surface = MeridianSurface(profile=build_profile(spec),
                                      directrix=_build_directrix(
                                          {"kind": "curvature",
                                           "kappa": cfg.get("kappa", "const:2")},
                                          grid))
            chart = IsotropicChart.for_minimal_family(surface, a, b)
            if system == "syst1":
                report = residual_syst1(lam, mu, nu, chart, grid, tol=tol)
            else:
                eps = int(cfg.get("epsilon", -1))
                tl, tm, tn, scale = transported_solution_family(a, b, kappa)
                ub, vb = chart.to_barred(*grid.mesh(), scale=scale)
                report = residual_fund(tl, tm, tn, eps, (ub, vb), tol=tol)

    payload = {"config": cfg, "report": report.to_json()}
    text = json.dumps(payload, indent=2)
    print(text)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "pde_report.json").write_text(text)
    return 0 if report.passed else 1


def cmd_selfcheck() -> int:
    results = acceptance.run_all()
    print(acceptance.format_table(results))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="meridian4",
        description="meridian surfaces: generation, verification, PDE residuals")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("generate", "verify", "geomfuncs", "pde", "export"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", choices=("csv", "json", "obj"),
                        default=None)
    sub.add_parser("selfcheck")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "selfcheck":
            return cmd_selfcheck()
        cfg = _load_json(args.config)
        thread_cap()
        out = args.out or cfg.get("out")
        tol = args.tol if args.tol is not None else float(cfg.get("tol", 1e-6))
        fmt = args.format or cfg.get("format", "csv")
        if tol <= 0:
            raise ConfigError("tol must be positive")
        if args.command == "generate":
            return cmd_generate(cfg, Path(out or "out"))
        if args.command == "export":
            return cmd_export(cfg, Path(out or "out"), fmt)
        if args.command == "verify":
            return cmd_verify(cfg, Path(out) if out else None, tol)
        if args.command == "geomfuncs":
            return cmd_geomfuncs(cfg, Path(out or "out"), fmt)
        if args.command == "pde":
            return cmd_pde(cfg, Path(out) if out else None,
                           args.tol if args.tol is not None
                           else float(cfg.get("tol", 1e-8)))
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MeridianError as exc:
        print(f"numeric/domain failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
