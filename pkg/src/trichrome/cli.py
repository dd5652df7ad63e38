"""Batch command line: fit structures, recolor images, export clouds,
launch the preview service, regenerate synthetic fixtures.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 non-convergence
under --strict.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .color_space import IlluminantAxis
from .editing import EditScript
from .fitting import FitConfig
from .imaging import ImageIOError, export_cloud_ply, load_image, save_image
from .structure import load_structure, save_structure
from .workflow import fit_image, init_from_angles, recolor_image, uniform_init

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NO_CONVERGENCE = 4


class UsageError(Exception):
    pass


def parse_axis(text: str) -> IlluminantAxis:
    if text == "gray":
        return IlluminantAxis.gray()
    try:
        a_str, b_str = text.split(":")
        a = np.array([float(v) for v in a_str.split(",")])
        b = np.array([float(v) for v in b_str.split(",")])
        if a.shape != (3,) or b.shape != (3,):
            raise ValueError
        return IlluminantAxis(a, b)
    except ValueError:
        raise UsageError(
            f"bad --axis {text!r}; expected 'gray' or 'ar,ag,ab:br,bg,bb'"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trichrome",
        description="Triangle-based color structure fitting and image recoloring",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_fit = sub.add_parser("fit", help="fit a triangular structure to an image")
    p_fit.add_argument("image", type=Path)
    p_fit.add_argument("--k", type=int, required=True, help="number of triangles")
    p_fit.add_argument("--axis", default="gray", help="'gray' or 'ar,ag,ab:br,bg,bb'")
    p_fit.add_argument(
        "--init", default="uniform", help="'uniform' or comma list of angles in degrees"
    )
    p_fit.add_argument("--stride", type=int, default=1, help="fit pixel subsampling")
    p_fit.add_argument("--max-iters", type=int, default=100)
    p_fit.add_argument("--angle-tol", type=float, default=1e-4)
    p_fit.add_argument("--strict", action="store_true", help="fail on non-convergence")
    p_fit.add_argument("--out", type=Path, required=True, help="structure JSON output")

    p_rec = sub.add_parser("recolor", help="apply an edit script to an image")
    p_rec.add_argument("image", type=Path)
    p_rec.add_argument("--structure", type=Path, required=True)
    p_rec.add_argument("--edits", type=Path, help="edit script JSON (default identity)")
    p_rec.add_argument(
        "--scale", type=float, help="override the script's filter scale"
    )
    p_rec.add_argument("--out", type=Path, required=True, help="output PNG")

    p_cloud = sub.add_parser("cloud", help="export the pixel cloud as ASCII PLY")
    p_cloud.add_argument("image", type=Path)
    p_cloud.add_argument("--structure", type=Path, help="overlay structure vertices")
    p_cloud.add_argument("--max-points", type=int, default=100_000)
    p_cloud.add_argument("--out", type=Path, required=True)

    p_serve = sub.add_parser("serve", help="run the interactive editing service")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--max-megapixels", type=float, default=32.0)

    p_synth = sub.add_parser("synth", help="regenerate a synthetic fixture image")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--width", type=int, default=256)
    p_synth.add_argument("--height", type=int, default=256)
    p_synth.add_argument("--out", type=Path, required=True)

    return parser


def cmd_fit(args) -> int:
    axis = parse_axis(args.axis)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    if args.init == "uniform":
        init = uniform_init(axis, args.k)
    else:
        try:
            angles = [float(v) for v in args.init.split(",")]
        except ValueError:
            raise UsageError(f"bad --init {args.init!r}") from None
        if len(angles) != args.k:
            raise UsageError(f"--init lists {len(angles)} angles but --k is {args.k}")
        init = init_from_angles(axis, angles)

    buf = load_image(args.image)
    cfg = FitConfig(
        max_iters=args.max_iters, angle_tol=args.angle_tol, stride=args.stride
    )
    s, _, report = fit_image(buf, init, cfg)
    save_structure(s, args.out)
    print(
        f"iters={report.iterations} objective={report.final_objective:.9g} "
        f"converged={str(report.converged).lower()} k={s.k} out={args.out}"
    )
    if args.strict and not report.converged:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_recolor(args) -> int:
    s = load_structure(args.structure)
    if args.edits is not None:
        try:
            script = EditScript.from_dict(
                json.loads(Path(args.edits).read_text(encoding="utf-8"))
            )
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise UsageError(f"bad edit script {args.edits}: {e}") from None
    else:
        script = EditScript.identity()
    if args.scale is not None:
        script = dataclasses.replace(script, filter_scale=args.scale)

    buf = load_image(args.image)
    out = recolor_image(buf, s, script)
    save_image(out, args.out)
    print(f"pixels={buf.width * buf.height} scale={script.filter_scale} out={args.out}")
    return EXIT_OK


def cmd_cloud(args) -> int:
    buf = load_image(args.image)
    s = load_structure(args.structure) if args.structure else None
    if args.max_points < 1:
        raise UsageError("--max-points must be >= 1")
    export_cloud_ply(buf, args.out, structure=s, max_points=args.max_points)
    print(f"points<={args.max_points} structure={s is not None} out={args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(max_megapixels=args.max_megapixels)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import MaterialSpec, SyntheticSpec, synthetic_image

    # fixed three-material scene used for fixture regeneration
    spec = SyntheticSpec(
        axis=IlluminantAxis.gray(),
        materials=(
            MaterialSpec(diffuse=(0.8, 0.1, 0.1), specular=(0.6, 0.6, 0.6)),
            MaterialSpec(diffuse=(0.1, 0.7, 0.2), specular=(0.5, 0.5, 0.5)),
            MaterialSpec(diffuse=(0.15, 0.2, 0.8), specular=(0.7, 0.7, 0.7)),
        ),
    )
    buf, angles = synthetic_image(spec, args.seed, args.width, args.height)
    save_image(buf, args.out)
    print(
        "angles=" + ",".join(f"{a:.6f}" for a in angles) + f" out={args.out}"
    )
    return EXIT_OK


_COMMANDS = {
    "fit": cmd_fit,
    "recolor": cmd_recolor,
    "cloud": cmd_cloud,
    "serve": cmd_serve,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ImageIOError, OSError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
