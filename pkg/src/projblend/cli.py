"""Command-line interface.

Subcommands: matrix, validate, frustum, render, sweep.  Exit codes are
stable across all of them: 0 success, 1 usage/parse/IO error, 2
parameter validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .frustum import frustum_corners
from .projection import (
    FiniteFar,
    IdentityMapping,
    InfiniteFar,
    InvalidParamsError,
    MappingFunction,
    PowerMapping,
    ProjectionParams,
    alpha_from_fovs,
    apply_mapping,
    generalized,
    theta_from_horizontal,
    validate,
)
from .render import (
    SceneFormatError,
    Scene,
    SweepSpec,
    DEFAULT_SWEEP_MAPPINGS,
    DEFAULT_SWEEP_P_VALUES,
    builtin_scene,
    load_scene,
    render,
    render_svg,
    render_sweep,
    sweep_svg,
    write_ppm,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; this tool reserves 2 for
    # parameter validation failures.
    def error(self, message: str):
        raise _UsageError(message)


def _fmt(v: float) -> str:
    # 17 significant digits round-trips doubles; collapse signed zeros.
    return "0" if v == 0 else f"{v:.17g}"


def _parse_mapping(text: str) -> MappingFunction:
    if text == "identity":
        return IdentityMapping()
    if text.startswith("pow:"):
        try:
            return PowerMapping(float(text[4:]))
        except ValueError:
            raise _UsageError(f"bad --mapping value {text!r} (expected identity or pow:<c>)") from None
    raise _UsageError(f"bad --mapping value {text!r} (expected identity or pow:<c>)")


def _add_projection_args(p: argparse.ArgumentParser) -> None:
    fov = p.add_mutually_exclusive_group()
    fov.add_argument("--fov-deg", type=float, help="vertical field of view in degrees (default 60)")
    fov.add_argument("--fov-rad", type=float, help="vertical field of view in radians")
    hfov = p.add_mutually_exclusive_group()
    hfov.add_argument("--hfov-deg", type=float, help="horizontal field of view in degrees")
    hfov.add_argument("--hfov-rad", type=float, help="horizontal field of view in radians")
    p.add_argument("--aspect", type=float, default=None, help="aspect ratio width/height (default 1)")
    p.add_argument("--near", type=float, default=0.1, help="near plane distance (default 0.1)")
    p.add_argument("--far", default="100", help="far plane distance, or 'inf' (default 100)")
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="depth tweak for an infinite far plane (default 0, the exact limit)")
    p.add_argument("--p", type=float, default=0.0, help="orthographic fraction in [0,1] (default 0)")
    p.add_argument("--d", type=float, default=None,
                   help="distance of equal cross-section; required when the blend fraction is positive, "
                        "otherwise defaults to (near+far)/2")
    p.add_argument("--shear-h", type=float, default=0.0, help="horizontal shear factor (default 0)")
    p.add_argument("--shear-v", type=float, default=0.0, help="vertical shear factor (default 0)")
    p.add_argument("--mapping", default="identity", help="blend remapping: identity or pow:<c> (default identity)")


def _resolve_fov(args) -> tuple[float, float]:
    """Turn the fov/hfov/aspect flag combination into (theta, alpha)."""
    theta = None
    if args.fov_deg is not None:
        theta = math.radians(args.fov_deg)
    elif args.fov_rad is not None:
        theta = args.fov_rad
    theta_h = None
    if args.hfov_deg is not None:
        theta_h = math.radians(args.hfov_deg)
    elif args.hfov_rad is not None:
        theta_h = args.hfov_rad

    if theta_h is None:
        return (theta if theta is not None else math.radians(60.0),
                args.aspect if args.aspect is not None else 1.0)
    if theta is not None:
        if args.aspect is not None:
            raise _UsageError("give at most two of vertical fov, horizontal fov and --aspect")
        return theta, alpha_from_fovs(theta, theta_h)
    alpha = args.aspect if args.aspect is not None else 1.0
    return theta_from_horizontal(theta_h, alpha), alpha


def _resolve_far(args) -> FiniteFar | InfiniteFar:
    text = str(args.far).strip().lower()
    if text == "inf":
        return InfiniteFar(args.epsilon)
    try:
        value = float(text)
    except ValueError:
        raise _UsageError(f"bad --far value {args.far!r} (expected a distance or 'inf')") from None
    if value == -1.0:
        sys.stderr.write("note: --far -1 is a legacy alias; use --far inf\n")
        return InfiniteFar(args.epsilon)
    return FiniteFar(value)


def _effective_q(mapping: MappingFunction, p: float) -> float | None:
    try:
        return apply_mapping(mapping, p)
    except InvalidParamsError:
        return None  # validation will report the bad p or c


def _default_d(far: FiniteFar | InfiniteFar, near: float) -> float:
    if isinstance(far, FiniteFar) and math.isfinite(far.distance):
        return (near + far.distance) / 2.0
    return 2.0 * near


def _params_from_args(args, *, d_optional: bool = False) -> ProjectionParams:
    theta, alpha = _resolve_fov(args)
    far = _resolve_far(args)
    mapping = _parse_mapping(args.mapping)
    d = args.d
    if d is None:
        q = _effective_q(mapping, args.p)
        if q is not None and q > 0.0 and not d_optional:
            raise _UsageError("--d is required when the blend fraction is positive")
        d = _default_d(far, args.near)
    return ProjectionParams(
        theta=theta,
        alpha=alpha,
        near=args.near,
        far=far,
        d=d,
        p=args.p,
        shear_h=args.shear_h,
        shear_v=args.shear_v,
        mapping=mapping,
    )


def _reject_invalid(params: ProjectionParams) -> None:
    rep = validate(params)
    if not rep.ok:
        raise InvalidParamsError(rep)


def _mapping_name(m: MappingFunction) -> str:
    return "identity" if isinstance(m, IdentityMapping) else f"pow:{m.c:g}"


def _cmd_matrix(args) -> int:
    params = _params_from_args(args)
    _reject_invalid(params)
    m = generalized(params)
    if args.format == "text":
        for row in m.rows:
            print(" ".join(_fmt(v) for v in row))
    else:
        far = params.far
        payload = {
            "rows": [[v + 0.0 for v in row] for row in m.rows],
            "params": {
                "theta": params.theta,
                "alpha": params.alpha,
                "near": params.near,
                "far": far.distance if isinstance(far, FiniteFar) else "inf",
                "epsilon": far.epsilon if isinstance(far, InfiniteFar) else None,
                "p": params.p,
                "d": params.d,
                "shear_h": params.shear_h,
                "shear_v": params.shear_v,
                "mapping": _mapping_name(params.mapping),
            },
        }
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def _cmd_validate(args) -> int:
    params = _params_from_args(args)
    rep = validate(params)
    for line in rep.lines():
        print(line)
    if rep.ok:
        if not rep.warnings:
            print("OK")
        return EXIT_OK
    return EXIT_INVALID


def _cmd_frustum(args) -> int:
    params = _params_from_args(args)
    if isinstance(params.far, InfiniteFar):
        sys.stderr.write("frustum corners undefined for infinite far plane\n")
        return EXIT_INVALID
    _reject_invalid(params)
    fr = frustum_corners(generalized(params))
    for c in fr.corners:
        print(f"{_fmt(c.x)} {_fmt(c.y)} {_fmt(c.z)}")
    return EXIT_OK


def _load_scene_arg(name: str) -> Scene:
    scene = builtin_scene(name)
    if scene is not None:
        return scene
    return load_scene(name)


def _out_format(args) -> str:
    if args.format:
        return args.format
    return "svg" if args.out.lower().endswith(".svg") else "ppm"


def _cmd_render(args) -> int:
    params = _params_from_args(args)
    scene = _load_scene_arg(args.scene)
    _reject_invalid(params)
    fmt = _out_format(args)
    if fmt == "svg":
        if args.mode != "wireframe":
            raise _UsageError("SVG output supports wireframe mode only")
        doc = render_svg(scene, params, args.width, args.height)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        img = render(scene, params, args.width, args.height, args.mode)
        write_ppm(img, args.out)
    return EXIT_OK


def _parse_float_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise _UsageError(f"bad {flag} value {text!r}") from None
    if not vals:
        raise _UsageError(f"{flag} needs at least one value")
    return vals


def _cmd_sweep(args) -> int:
    # The sweep varies p itself, so --d falls back to (near+far)/2 here.
    params = _params_from_args(args, d_optional=True)
    scene = _load_scene_arg(args.scene)
    _reject_invalid(params)

    if args.mappings:
        mappings = tuple(_parse_mapping(t.strip()) for t in args.mappings.split(",") if t.strip())
        if not mappings:
            raise _UsageError("--mappings needs at least one value")
    else:
        mappings = DEFAULT_SWEEP_MAPPINGS
    p_values = (_parse_float_list(args.p_values, "--p-values")
                if args.p_values else DEFAULT_SWEEP_P_VALUES)

    spec = SweepSpec(
        mappings=mappings,
        p_values=p_values,
        params=params,
        scene=scene,
        panel_width=args.panel_width,
        panel_height=args.panel_height,
        mode=args.mode,
    )
    fmt = _out_format(args)
    if fmt == "svg":
        if args.mode != "wireframe":
            raise _UsageError("SVG output supports wireframe mode only")
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(sweep_svg(spec))
    else:
        write_ppm(render_sweep(spec), args.out)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="projblend", description="Blendable perspective/orthographic projections.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_matrix = sub.add_parser("matrix", help="print the projection matrix")
    _add_projection_args(p_matrix)
    p_matrix.add_argument("--format", choices=("text", "json"), default="text")
    p_matrix.set_defaults(func=_cmd_matrix)

    p_val = sub.add_parser("validate", help="check parameters and report violations/warnings")
    _add_projection_args(p_val)
    p_val.set_defaults(func=_cmd_validate)

    p_fr = sub.add_parser("frustum", help="print the 8 eye-space frustum corners")
    _add_projection_args(p_fr)
    p_fr.set_defaults(func=_cmd_frustum)

    p_render = sub.add_parser("render", help="render a scene to PPM or SVG")
    _add_projection_args(p_render)
    p_render.add_argument("--scene", required=True, help="scene file path or built-in name (paper-fig1)")
    p_render.add_argument("--out", required=True, help="output file")
    p_render.add_argument("--format", choices=("ppm", "svg"), default=None,
                          help="output format (default: from --out extension)")
    p_render.add_argument("--width", type=int, default=256)
    p_render.add_argument("--height", type=int, default=256)
    p_render.add_argument("--mode", choices=("wireframe", "flat"), default="wireframe")
    p_render.set_defaults(func=_cmd_render)

    p_sweep = sub.add_parser("sweep", help="render the mapping x p comparison grid")
    _add_projection_args(p_sweep)
    p_sweep.add_argument("--scene", required=True, help="scene file path or built-in name (paper-fig1)")
    p_sweep.add_argument("--out", required=True, help="output file")
    p_sweep.add_argument("--format", choices=("ppm", "svg"), default=None)
    p_sweep.add_argument("--panel-width", type=int, default=200)
    p_sweep.add_argument("--panel-height", type=int, default=200)
    p_sweep.add_argument("--mode", choices=("wireframe", "flat"), default="wireframe")
    p_sweep.add_argument("--mappings", default=None,
                         help="comma-separated mappings (default pow:1,pow:3,pow:5,pow:7,pow:9)")
    p_sweep.add_argument("--p-values", default=None,
                         help="comma-separated p values (default 0.25,0.5,0.75)")
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except InvalidParamsError as exc:
        for line in exc.report.lines():
            sys.stderr.write(line + "\n")
        return EXIT_INVALID
    except SceneFormatError as exc:
        sys.stderr.write(f"scene error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
