"""Command-line interface: meshes, curvature grids, Gauss-Bonnet reports.

A single JSON configuration document drives every subcommand; CLI flags
override individual fields.  Exit codes: 0 success, 1 configuration or
usage error, 2 numerical/domain failure, 3 validation or threshold
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, catalog
from .curvature import k_gauss_map, k_inf, k_L, k_n
from .errors import GeometryError
from .expr import EvalError, ParseError
from .export import write_csv, write_json_report, write_obj
from .gaussbonnet import ParamRegion, convergence_study, gb_residual
from .rotsurf import RotationSurfaceSpec, build_mesh, domain_bound
from .selfcheck import run_identity_suite
from .surface import frame_data, pushforward_frame

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3

FIGURE_PRESETS = {1: (1.0, 1.0), 2: (0.0, 1.0), 3: (-1.0, 1.0)}


class ConfigError(ValueError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as handle:
            cfg = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config document must be a JSON object")
    return cfg


def _parse_floats(text, n, what):
    parts = [p for p in str(text).replace(";", ",").split(",") if p.strip()]
    if n is not None and len(parts) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad number in {what}: {exc}") from exc


def _surface_config(args, config) -> dict:
    cfg = dict(config.get("surface", {}))
    if getattr(args, "surface", None):
        cfg = {"kind": args.surface}
    if getattr(args, "kinf", None) is not None:
        cfg.setdefault("kind", "rotation")
        if cfg["kind"] != "rotation":
            raise ConfigError("--kinf only applies to rotation surfaces")
        cfg["K_inf"] = args.kinf
    if getattr(args, "r0", None) is not None:
        cfg.setdefault("kind", "rotation")
        cfg["r0"] = args.r0
    if not cfg:
        raise ConfigError("no surface given; use --surface or a config file")
    if cfg.get("kind") == "rotation" and "K_inf" not in cfg:
        raise ConfigError("rotation surface needs K_inf (--kinf or config)")
    return cfg


def _build_surface(cfg: dict):
    try:
        return catalog.surface_from_config(cfg)
    except (ValueError, KeyError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise ConfigError(str(exc)) from exc


def _positive_int(cfg_value, flag_value, default, what) -> int:
    value = flag_value if flag_value is not None else cfg_value if cfg_value is not None else default
    value = int(value)
    if value <= 0:
        raise ConfigError(f"{what} must be positive")
    return value


def _l_values(args, config, default):
    values = (
        _parse_floats(args.l_values, None, "--l-values")
        if args.l_values
        else [float(L) for L in config.get("L", default)]
    )
    if not values or any(not math.isfinite(L) or L <= 0 for L in values):
        raise ConfigError("L values must be positive and finite")
    return values


def _char_tol(args, config) -> float:
    tol = getattr(args, "char_tol", None)
    if tol is None:
        tol = config.get("tolerances", {}).get("characteristic", 1e-10)
    tol = float(tol)
    if not (math.isfinite(tol) and tol > 0):
        raise ConfigError("characteristic tolerance must be positive")
    return tol


# ---------------------------------------------------------------------------
# rotsurf


def cmd_rotsurf(args) -> int:
    config = _load_config(args.config)
    section = dict(config.get("rotsurf", {}))
    if args.figure is not None:
        kinf, r0 = FIGURE_PRESETS[args.figure]
        section["K_inf"], section["r0"] = kinf, r0
    if args.kinf is not None:
        section["K_inf"] = args.kinf
    if args.r0 is not None:
        section["r0"] = args.r0
    if args.c1_shift is not None:
        section["c1_shift"] = args.c1_shift
    if args.vmin is not None or args.vmax is not None:
        lo, hi = section.get("v_range", (None, None))
        lo = args.vmin if args.vmin is not None else lo
        hi = args.vmax if args.vmax is not None else hi
        if lo is None or hi is None:
            raise ConfigError("give both --vmin and --vmax (or a config v_range)")
        section["v_range"] = [float(lo), float(hi)]
    if "K_inf" not in section:
        raise ConfigError("rotsurf needs K_inf (via --kinf, --figure or config)")

    spec = RotationSurfaceSpec(
        K_inf=float(section["K_inf"]),
        r0=float(section.get("r0", 1.0)),
        c1_shift=float(section.get("c1_shift", 0.0)),
        v_range=tuple(section["v_range"]) if "v_range" in section else None,
        samples_u=_positive_int(section.get("samples_u"), args.samples_u, 128, "samples_u"),
        samples_v=_positive_int(section.get("samples_v"), args.samples_v, 128, "samples_v"),
        n_curves=int(section.get("n_curves", args.n_curves if args.n_curves is not None else 8)),
    )
    try:
        spec.validate()
    except GeometryError as exc:
        lo, hi = domain_bound(spec.K_inf, spec.r0)
        print(
            f"error: {exc}\nexistence domain for K_inf={spec.K_inf}, r0={spec.r0}: "
            f"({lo:.9g}, {hi:.9g})",
            file=sys.stderr,
        )
        return EXIT_NUMERIC

    mesh = build_mesh(spec)
    effective = {
        "command": "rotsurf",
        "K_inf": spec.K_inf,
        "r0": spec.r0,
        "c1_shift": spec.c1_shift,
        "v_range": list(spec.resolved_v_range()),
        "samples_u": spec.samples_u,
        "samples_v": spec.samples_v,
        "n_curves": spec.n_curves,
    }
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    obj_path = prefix.with_suffix(".obj")
    write_obj(obj_path, mesh, effective)
    csv_path = prefix.parent / (prefix.name + "_profile.csv")
    write_csv(
        csv_path,
        ["t", "r", "r_prime", "theta", "c", "A"],
        mesh.profile_rows,
        effective,
    )
    print(f"wrote {obj_path} and {csv_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# curvature grid


def _grid(patch, nu, nv):
    us = np.linspace(patch.u_range[0], patch.u_range[1], nu)
    vs = np.linspace(patch.v_range[0], patch.v_range[1], nv)
    return us, vs


def cmd_curvature(args) -> int:
    config = _load_config(args.config)
    surface_cfg = _surface_config(args, config)
    patch = _build_surface(surface_cfg)
    nu = _positive_int(config.get("grid", {}).get("nu"), args.nu, 24, "nu")
    nv = _positive_int(config.get("grid", {}).get("nv"), args.nv, 24, "nv")
    char_tol = _char_tol(args, config)
    L_values = _l_values(args, config, [1.0, 10.0, 100.0])
    directions = config.get("kn_directions", [[1.0, 0.0]])
    if args.kn_directions:
        directions = [
            _parse_floats(chunk, 2, "--kn-directions")
            for chunk in args.kn_directions.split(";")
            if chunk.strip()
        ]

    effective = {
        "command": "curvature",
        "surface": surface_cfg,
        "grid": {"nu": nu, "nv": nv},
        "L": L_values,
        "kn_directions": directions,
        "characteristic_tol": char_tol,
    }
    columns = ["u", "v", "x", "y", "z", "alpha", "A", "K_inf", "K_gauss"]
    columns += [f"K_L_{L:g}" for L in L_values]
    columns += [f"k_n_{d[0]:g}_{d[1]:g}" for d in directions]
    columns.append("characteristic")

    us, vs = _grid(patch, nu, nv)
    rows = []
    flagged = 0
    for v in vs:
        for u in us:
            u, v = float(u), float(v)
            pos = patch.position(u, v)
            try:
                sample, fd = frame_data(patch, u, v, tol=char_tol)
            except GeometryError:
                flagged += 1
                rows.append(
                    [u, v, pos.x, pos.y, pos.z]
                    + [math.nan] * (4 + len(L_values) + len(directions))
                    + [1]
                )
                continue
            row = [u, v, pos.x, pos.y, pos.z, sample.alpha, sample.A]
            row.append(k_inf(fd, sample.A))
            row.append(k_gauss_map(fd))
            row += [k_L(fd, sample.A, L) for L in L_values]
            f_u, f_v = pushforward_frame(patch, u, v)
            for du, dv in directions:
                b = du * f_u.c3 + dv * f_v.c3
                row.append(k_n(sample.A, b) if b != 0.0 else math.nan)
            row.append(0)
            rows.append(row)
    if flagged == len(rows):
        print("error: every grid point is characteristic", file=sys.stderr)
        return EXIT_NUMERIC
    write_csv(args.out, columns, rows, effective)
    print(f"wrote {args.out} ({len(rows)} rows, {flagged} characteristic)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# frames grid


def cmd_frames(args) -> int:
    config = _load_config(args.config)
    surface_cfg = _surface_config(args, config)
    patch = _build_surface(surface_cfg)
    nu = _positive_int(config.get("grid", {}).get("nu"), args.nu, 16, "nu")
    nv = _positive_int(config.get("grid", {}).get("nv"), args.nv, 16, "nv")
    char_tol = _char_tol(args, config)
    effective = {
        "command": "frames",
        "surface": surface_cfg,
        "grid": {"nu": nu, "nv": nv},
        "characteristic_tol": char_tol,
    }
    columns = [
        "u", "v", "x", "y", "z", "alpha", "A",
        "f1_c1", "f1_c2", "f2_c1", "f2_c2", "f3_c1", "f3_c2", "f3_c3",
        "dA_f2", "dA_f3", "dalpha_f2", "dalpha_f3", "characteristic",
    ]
    us, vs = _grid(patch, nu, nv)
    rows = []
    for v in vs:
        for u in us:
            u, v = float(u), float(v)
            pos = patch.position(u, v)
            try:
                sample, fd = frame_data(patch, u, v, tol=char_tol)
            except GeometryError:
                rows.append([u, v, pos.x, pos.y, pos.z] + [math.nan] * 13 + [1])
                continue
            rows.append(
                [
                    u, v, pos.x, pos.y, pos.z, sample.alpha, sample.A,
                    sample.f1.c1, sample.f1.c2, sample.f2.c1, sample.f2.c2,
                    sample.f3.c1, sample.f3.c2, sample.f3.c3,
                    fd.dA_f2, fd.dA_f3, fd.dalpha_f2, fd.dalpha_f3, 0,
                ]
            )
    write_csv(args.out, columns, rows, effective)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# gauss-bonnet


GB_PRESETS = {
    "plane-annulus": {"surface": {"kind": "plane"}, "region": {"u": [0.0, 2.0 * math.pi], "v": [1.0, 2.0], "closed_u": True}},
    "band-k1": {"surface": {"kind": "rotation", "K_inf": 1.0, "r0": 1.0}, "region": {"u": [0.0, 2.0 * math.pi], "v": [-0.5, 0.8], "closed_u": True}},
    "band-k0": {"surface": {"kind": "rotation", "K_inf": 0.0, "r0": 1.0}, "region": {"u": [0.0, 2.0 * math.pi], "v": [0.3, 1.2], "closed_u": True}},
    "band-km1": {"surface": {"kind": "rotation", "K_inf": -1.0, "r0": 1.0}, "region": {"u": [0.0, 2.0 * math.pi], "v": [-1.0, 1.5], "closed_u": True}},
}


def _region_from_config(cfg: dict, patch) -> ParamRegion:
    if "u" not in cfg or "v" not in cfg:
        raise ConfigError("region needs 'u' and 'v' interval fields")
    (u0, u1), (v0, v1) = cfg["u"], cfg["v"]
    return ParamRegion(
        float(u0),
        float(u1),
        float(v0),
        float(v1),
        closed_u=bool(cfg.get("closed_u", patch.closed_u)),
        orientation=int(cfg.get("orientation", 1)),
    )


def cmd_gauss_bonnet(args) -> int:
    config = _load_config(args.config)
    if args.preset:
        preset = GB_PRESETS[args.preset]
        config = {**config, "surface": preset["surface"], "region": preset["region"]}
    surface_cfg = _surface_config(args, config)
    patch = _build_surface(surface_cfg)
    region_cfg = dict(config.get("region", {}))
    if args.region:
        u0, u1, v0, v1 = _parse_floats(args.region, 4, "--region")
        region_cfg.update({"u": [u0, u1], "v": [v0, v1]})
    if args.closed_u:
        region_cfg["closed_u"] = True
    if not region_cfg:
        region_cfg = {
            "u": list(patch.u_range),
            "v": list(patch.v_range),
            "closed_u": patch.closed_u,
        }
    region = _region_from_config(region_cfg, patch)
    threshold = args.threshold if args.threshold is not None else float(
        config.get("tolerances", {}).get("residual", 1e-8)
    )
    effective = {
        "command": "gauss-bonnet",
        "surface": surface_cfg,
        "region": {
            "u": [region.u0, region.u1],
            "v": [region.v0, region.v1],
            "closed_u": region.closed_u,
            "orientation": region.orientation,
        },
        "threshold": threshold,
    }
    report = gb_residual(patch, region)
    payload = {
        "area_integral": report.area_integral,
        "boundary_integral": report.boundary_integral,
        "residual": report.residual,
        "area_error_est": report.area_error_est,
        "boundary_error_est": report.boundary_error_est,
        "threshold": threshold,
        "within_threshold": abs(report.residual) <= threshold,
    }
    write_json_report(args.out, payload, effective)
    print(
        f"area {report.area_integral:.12g}  boundary {report.boundary_integral:.12g}  "
        f"residual {report.residual:.3e} (threshold {threshold:g})"
    )
    if abs(report.residual) > threshold:
        print("error: residual exceeds threshold", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# converge


def cmd_converge(args) -> int:
    config = _load_config(args.config)
    surface_cfg = _surface_config(args, config)
    patch = _build_surface(surface_cfg)
    L_values = _l_values(args, config, [1e2, 1e3, 1e4, 1e5, 1e6])
    if args.point:
        point = tuple(_parse_floats(args.point, 2, "--point"))
    elif "point" in config:
        point = tuple(float(x) for x in config["point"])
    else:
        point = (
            0.5 * (patch.u_range[0] + patch.u_range[1]),
            0.5 * (patch.v_range[0] + patch.v_range[1]),
        )
    direction = (
        tuple(_parse_floats(args.direction, 2, "--direction"))
        if args.direction
        else tuple(config.get("direction", (1.0, 0.0)))
    )
    effective = {
        "command": "converge",
        "surface": surface_cfg,
        "point": list(point),
        "direction": list(direction),
        "L": L_values,
    }
    study = convergence_study(patch, [point], L_values, direction=direction)
    result = study.points[0]
    columns = [
        "L", "K_L", "abs_err_K", "sigma_L", "rescaled_sigma", "K_L_sigma_L",
        "k_n_L", "abs_err_k_n", "ds_L_density",
    ]
    rows = [
        [r.L, r.K_L, r.err_K, r.sigma_L, r.rescaled_sigma, r.K_L_sigma_L, r.k_n_L, r.err_k_n, r.ds_L]
        for r in result.rows
    ]
    footer = [
        f"K_inf {result.K_inf:.17g}",
        f"k_n {result.k_n_limit:.17g}" if result.k_n_limit is not None else "k_n nan",
        f"slope_err_K {result.slope_err_K}",
        f"slope_err_k_n {result.slope_err_k_n}",
        f"slope_sigma_L {result.slope_sigma}",
        f"slope_K_L_sigma_L {result.slope_K_L_sigma}",
    ]
    write_csv(args.out, columns, rows, effective, footer_comments=footer)
    print(f"wrote {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    results = run_identity_suite()
    failed = 0
    for result in results:
        tag = "PASS" if result.passed else "FAIL"
        print(f"[{tag}] {result.name}: {result.detail}")
        failed += 0 if result.passed else 1
    if failed:
        print(f"{failed} identity check(s) failed", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"all {len(results)} identity checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _add_surface_flags(sub):
    sub.add_argument("--config", help="JSON configuration document")
    sub.add_argument(
        "--surface",
        choices=["plane", "plane-cartesian", "cylinder", "paraboloid", "rotation"],
        help="catalog surface name",
    )
    sub.add_argument("--kinf", type=float, help="rotation-family curvature")
    sub.add_argument("--r0", type=float, help="rotation-family radius parameter")
    sub.add_argument(
        "--char-tol",
        dest="char_tol",
        type=float,
        help="relative tolerance of the characteristic-point test (default 1e-10)",
    )


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="h1geom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"h1geom {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    rot = subs.add_parser("rotsurf", help="mesh a constant-curvature rotation surface")
    rot.add_argument("--config")
    rot.add_argument("--figure", type=int, choices=[1, 2, 3], help="preset (K_inf, r0)")
    rot.add_argument("--kinf", type=float)
    rot.add_argument("--r0", type=float)
    rot.add_argument("--c1-shift", dest="c1_shift", type=float)
    rot.add_argument("--vmin", type=float)
    rot.add_argument("--vmax", type=float)
    rot.add_argument("--samples-u", dest="samples_u", type=int)
    rot.add_argument("--samples-v", dest="samples_v", type=int)
    rot.add_argument("--n-curves", dest="n_curves", type=int)
    rot.add_argument("--out-prefix", dest="out_prefix", default="rotsurf")
    rot.set_defaults(func=cmd_rotsurf)

    cur = subs.add_parser("curvature", help="curvature quantities on a parameter grid")
    _add_surface_flags(cur)
    cur.add_argument("--nu", type=int)
    cur.add_argument("--nv", type=int)
    cur.add_argument("--l-values", dest="l_values")
    cur.add_argument("--kn-directions", dest="kn_directions")
    cur.add_argument("--out", default="curvature.csv")
    cur.set_defaults(func=cmd_curvature)

    frm = subs.add_parser("frames", help="adapted-frame samples on a parameter grid")
    _add_surface_flags(frm)
    frm.add_argument("--nu", type=int)
    frm.add_argument("--nv", type=int)
    frm.add_argument("--out", default="frames.csv")
    frm.set_defaults(func=cmd_frames)

    gb = subs.add_parser("gauss-bonnet", help="verify the limit Gauss-Bonnet identity")
    _add_surface_flags(gb)
    gb.add_argument("--preset", choices=sorted(GB_PRESETS))
    gb.add_argument("--region", help="u0,u1,v0,v1")
    gb.add_argument("--closed-u", dest="closed_u", action="store_true")
    gb.add_argument("--threshold", type=float)
    gb.add_argument("--out", default="gauss_bonnet.json")
    gb.set_defaults(func=cmd_gauss_bonnet)

    con = subs.add_parser("converge", help="L-sweep of the limit relations at a point")
    _add_surface_flags(con)
    con.add_argument("--point", help="u,v")
    con.add_argument("--direction", help="du,dv for the normal-curvature sweep")
    con.add_argument("--l-values", dest="l_values")
    con.add_argument("--out", default="converge.csv")
    con.set_defaults(func=cmd_converge)

    chk = subs.add_parser("check", help="run the built-in identity suite")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EvalError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # bad user-supplied values that slipped past explicit validation
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
