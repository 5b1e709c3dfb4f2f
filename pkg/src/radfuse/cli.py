"""Command-line front end.

Subcommands map one-to-one onto the library modules: ``plan``,
``transform``, ``preprocess``, ``fuse``, ``radon``, ``coverage`` and
``bench``.  Every command that writes files also writes a run manifest
(JSON) recording the tool version, the resolved configuration, the plan
hash where one is involved, and SHA-256 digests of all inputs and
outputs, so batch runs can be audited and reproduced.

Exit codes: 0 success, 2 bad flags, 3 bad configuration, 4 bad data,
5 internal error.  ``RADEX_WORKERS`` supplies the default worker count
anywhere ``--workers`` is accepted.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .bench import format_table, run_scaling_bench
from .coverage import coverage_image, coverage_of, coverage_sweep, sweep_to_csv
from .curves import ImageDims
from .engine import (
    Sinogram,
    normalize_sinogram,
    radex_sinogram,
    radon_linear,
    read_sinogram,
    write_sinogram,
)
from .errors import ConfigError, DataError, EXIT_INTERNAL, RadfuseError
from .fuse import fuse
from .imgio import load_image, save_pgm, save_png, to_uint8
from .plan import PlanConfig, build_plan, load_plan, plan_hash, save_plan
from .preprocess import PreprocessConfig, preprocess_pipeline, to_grayscale

_IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".pgm", ".bmp"}


def _default_workers() -> int:
    raw = os.environ.get("RADEX_WORKERS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"RADEX_WORKERS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"RADEX_WORKERS must be >= 1, got {value}")
    return value


def _utc_stamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    path,
    command: str,
    config: dict,
    inputs: list,
    outputs: list,
    started: str,
    plan_digest: str | None = None,
) -> None:
    doc = {
        "tool": "radfuse",
        "version": __version__,
        "command": command,
        "config": config,
        "plan_hash": plan_digest,
        "inputs": [{"path": str(p), "sha256": _sha256_file(p)} for p in inputs],
        "outputs": [{"path": str(p), "sha256": _sha256_file(p)} for p in outputs],
        "started_utc": started,
        "finished_utc": _utc_stamp(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _collect_images(path: Path) -> list[Path]:
    if path.is_dir():
        found = sorted(p for p in path.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES)
        if not found:
            raise DataError(f"{path}: directory contains no image files")
        return found
    if not path.exists():
        raise DataError(f"{path}: no such file or directory")
    return [path]


def _load_grayscale(path) -> np.ndarray:
    arr = load_image(path)
    return arr if arr.ndim == 2 else to_grayscale(arr)


def _plan_config_from_args(args) -> PlanConfig:
    return PlanConfig(
        dims=ImageDims(args.size),
        m_divisions=args.m_div,
        special_c_count=args.c_count,
        c_range_low=args.c_range[0],
        c_range_high=args.c_range[1],
        c_range_step=args.c_step,
    )


def _echo_plan_config(config: PlanConfig) -> dict:
    return {
        "m": config.dims.m,
        "m_divisions": config.m_divisions,
        "special_c_count": config.special_c_count,
        "c_range_low": config.c_range_low,
        "c_range_high": config.c_range_high,
        "c_range_step": config.c_range_step,
    }


def _verbose_config(args, config: dict) -> None:
    if args.verbose:
        print(f"resolved config: {json.dumps(config, sort_keys=True)}", file=sys.stderr)


def cmd_plan(args) -> int:
    started = _utc_stamp()
    config = _plan_config_from_args(args)
    echo = _echo_plan_config(config)
    _verbose_config(args, echo)
    plan = build_plan(config)
    out = Path(args.out) if args.out else Path(f"plan_{args.size}.json")
    save_plan(out, plan)
    digest = plan_hash(plan)
    print(
        f"plan {out}: {len(plan.q_values)} q values x {len(plan.c_values)} c values "
        f"= {plan.curve_count} curves"
    )
    if args.coverage:
        cmap = coverage_of(plan, workers=_default_workers())
        print(f"predicted coverage: {cmap.fraction:.6f}")
    _write_manifest(
        str(out) + ".manifest.json", "plan", echo, [], [out], started, plan_digest=digest
    )
    return 0


def cmd_transform(args) -> int:
    started = _utc_stamp()
    workers = args.workers if args.workers is not None else _default_workers()
    plan = load_plan(args.plan)
    digest = plan_hash(plan)
    echo = {"plan": str(args.plan), "workers": workers, "render": bool(args.render)}
    _verbose_config(args, echo)
    images = _collect_images(Path(args.input))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    worst = 0
    for src in images:
        try:
            frame = _load_grayscale(src)
            sino = radex_sinogram(frame, plan, workers=workers)
            dst = outdir / (src.stem + ".radexsg")
            write_sinogram(dst, sino)
            outputs.append(dst)
            if args.render:
                # Render from the float32 values as stored, so rendering a
                # re-read file gives the same bytes.
                stored = sino.values.astype(np.float32).astype(np.float64)
                render = normalize_sinogram(Sinogram(values=stored, plan=plan))
                png = outdir / (src.stem + "_sino.png")
                save_png(png, to_uint8(render))
                outputs.append(png)
        except RadfuseError as exc:
            print(f"error: {src}: {exc}", file=sys.stderr)
            worst = max(worst, exc.exit_code)
    _write_manifest(
        outdir / "manifest.json", "transform", echo, [args.plan, *images], outputs,
        started, plan_digest=digest,
    )
    return worst


def _preprocess_config_from_args(args) -> PreprocessConfig:
    fields = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise DataError(f"{args.config}: cannot read config ({exc})") from exc
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.config}: not valid JSON ({exc})") from exc
        allowed = set(PreprocessConfig.__dataclass_fields__)
        unknown = set(loaded) - allowed
        if unknown:
            raise ConfigError(f"unknown preprocess config keys: {sorted(unknown)}")
        fields.update(loaded)
    # Flags beat the config file, which beats built-in defaults.
    if args.side is not None:
        fields["target_side"] = args.side
    if args.crop_threshold is not None:
        fields["crop_threshold"] = args.crop_threshold
    if args.denoise_sigma is not None:
        fields["denoise_sigma"] = args.denoise_sigma
    return PreprocessConfig(**fields)


def cmd_preprocess(args) -> int:
    started = _utc_stamp()
    config = _preprocess_config_from_args(args)
    echo = {k: getattr(config, k) for k in PreprocessConfig.__dataclass_fields__}
    _verbose_config(args, echo)
    images = _collect_images(Path(args.input))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    worst = 0
    for src in images:
        try:
            rgb = load_image(src, force_rgb=True)
            result = preprocess_pipeline(rgb, config)
            dst = outdir / (src.stem + "_pre.png")
            save_png(dst, to_uint8(result))
            outputs.append(dst)
        except RadfuseError as exc:
            print(f"error: {src}: {exc}", file=sys.stderr)
            worst = max(worst, exc.exit_code)
    _write_manifest(outdir / "manifest.json", "preprocess", echo, images, outputs, started)
    return worst


def cmd_fuse(args) -> int:
    started = _utc_stamp()
    image = _load_grayscale(args.image)
    sino = read_sinogram(args.sinogram)
    digest = plan_hash(sino.plan)
    render = normalize_sinogram(sino)
    fused = fuse(image, render, source_id=str(args.image), plan_hash=digest)
    save_png(args.out, to_uint8(fused.pixels))
    echo = {"image": str(args.image), "sinogram": str(args.sinogram)}
    _verbose_config(args, echo)
    _write_manifest(
        str(args.out) + ".manifest.json", "fuse", echo,
        [args.image, args.sinogram], [args.out], started, plan_digest=digest,
    )
    return 0


def cmd_radon(args) -> int:
    started = _utc_stamp()
    frame = _load_grayscale(args.input)
    echo = {"angles": args.angles}
    _verbose_config(args, echo)
    matrix = radon_linear(frame, angle_count=args.angles)
    lo, hi = float(matrix.min()), float(matrix.max())
    levels = np.zeros_like(matrix) if hi == lo else (matrix - lo) / (hi - lo)
    save_png(args.out, to_uint8(levels))
    _write_manifest(
        str(args.out) + ".manifest.json", "radon", echo, [args.input], [args.out], started
    )
    return 0


def _sweep_configs(path) -> list[PlanConfig]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"{path}: cannot read sweep file ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, list) or not doc:
        raise DataError(f"{path}: expected a non-empty JSON list of configs")
    configs = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "m" not in entry:
            raise DataError(f"{path}: entry {i} must be an object with an 'm' key")
        configs.append(
            PlanConfig(
                dims=ImageDims(int(entry["m"])),
                m_divisions=int(entry.get("m_divisions", 50)),
                special_c_count=(
                    int(entry["special_c_count"]) if "special_c_count" in entry else None
                ),
                c_range_low=float(entry.get("c_range_low", -1.0)),
                c_range_high=float(entry.get("c_range_high", 1.0)),
                c_range_step=float(entry.get("c_range_step", 0.1)),
            )
        )
    return configs


def cmd_coverage(args) -> int:
    started = _utc_stamp()
    workers = args.workers if args.workers is not None else _default_workers()
    if args.sweep:
        if not args.out:
            raise ConfigError("--sweep needs --out for the CSV table")
        configs = _sweep_configs(args.sweep)
        echo = {"sweep": str(args.sweep), "workers": workers}
        _verbose_config(args, echo)
        rows = coverage_sweep(configs, workers=workers)
        for row in rows:
            if row.error:
                print(f"warning: config M={row.config.dims.m}: {row.error}", file=sys.stderr)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(sweep_to_csv(rows))
        _write_manifest(
            str(args.out) + ".manifest.json", "coverage", echo, [args.sweep],
            [args.out], started,
        )
        return 0
    if args.size is None:
        raise ConfigError("coverage needs either --size or --sweep")
    config = _plan_config_from_args(args)
    echo = {**_echo_plan_config(config), "workers": workers}
    _verbose_config(args, echo)
    plan = build_plan(config)
    cmap = coverage_of(plan, workers=workers)
    print(f"coverage: {cmap.fraction:.6f} over {plan.curve_count} curves")
    outputs = []
    if args.out_image:
        dst = Path(args.out_image)
        img = coverage_image(cmap)
        if dst.suffix.lower() == ".pgm":
            save_pgm(dst, img)
        else:
            save_png(dst, img)
        outputs.append(dst)
        _write_manifest(
            str(dst) + ".manifest.json", "coverage", echo, [], outputs, started,
            plan_digest=plan_hash(plan),
        )
    return 0


def cmd_bench(args) -> int:
    started = _utc_stamp()
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    echo = {"sizes": sizes, "reps": args.reps, "workers": workers}
    _verbose_config(args, echo)
    report = run_scaling_bench(sizes, repetitions=args.reps, workers=workers)
    print(format_table(report))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_manifest(str(args.out) + ".manifest.json", "bench", echo, [], [args.out], started)
    return 0


def _add_plan_flags(sub: argparse.ArgumentParser, size_required: bool) -> None:
    sub.add_argument("--size", type=int, required=size_required, metavar="M",
                     help="square frame side in pixels")
    sub.add_argument("--m-div", type=int, default=50, metavar="N",
                     help="number of shift-grid steps (default 50)")
    sub.add_argument("--c-count", type=int, default=None, metavar="K",
                     help="curvatures to keep from the harvest (default M//2)")
    sub.add_argument("--c-range", type=float, nargs=2, default=(-1.0, 1.0),
                     metavar=("LO", "HI"), help="curvature range to pad out to")
    sub.add_argument("--c-step", type=float, default=0.1, metavar="S",
                     help="boundary ramp increment (default 0.1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radfuse",
        description="Curve-family sinogram transforms for square images: "
                    "plan parameters, generate sinograms, measure coverage, "
                    "preprocess and fuse.",
    )
    parser.add_argument("--version", action="version", version=f"radfuse {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="print resolved configuration to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("plan", help="build and save a transform plan")
    _add_plan_flags(p, size_required=True)
    p.add_argument("--out", metavar="FILE", help="plan path (default plan_<M>.json)")
    p.add_argument("--coverage", action="store_true",
                   help="also rasterise the plan and print its pixel coverage")
    p.set_defaults(func=cmd_plan)

    p = commands.add_parser("transform", help="generate sinograms from a saved plan")
    p.add_argument("--plan", required=True, metavar="FILE")
    p.add_argument("--in", dest="input", required=True, metavar="PATH",
                   help="image file or directory of images")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--render", action="store_true",
                   help="also write a normalised PNG rendering per sinogram")
    p.add_argument("--workers", type=int, default=None, metavar="N",
                   help="thread count (default $RADEX_WORKERS or 1)")
    p.set_defaults(func=cmd_transform)

    p = commands.add_parser("preprocess", help="condition colour images for the transform")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--config", metavar="FILE", help="JSON overriding pipeline defaults")
    p.add_argument("--side", type=int, default=None, metavar="N",
                   help="working resolution (overrides config file)")
    p.add_argument("--crop-threshold", type=float, default=None, metavar="T")
    p.add_argument("--denoise-sigma", type=float, default=None, metavar="S")
    p.set_defaults(func=cmd_preprocess)

    p = commands.add_parser("fuse", help="place an image and its sinogram side by side")
    p.add_argument("--image", required=True, metavar="FILE")
    p.add_argument("--sinogram", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_fuse)

    p = commands.add_parser("radon", help="straight-line projection baseline")
    p.add_argument("--in", dest="input", required=True, metavar="FILE")
    p.add_argument("--angles", type=int, default=180, metavar="N")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_radon)

    p = commands.add_parser("coverage", help="measure pixel coverage of plans")
    _add_plan_flags(p, size_required=False)
    p.add_argument("--out-image", metavar="FILE", help="write the visited-pixel mask (PNG/PGM)")
    p.add_argument("--sweep", metavar="FILE", help="JSON list of configs to sweep")
    p.add_argument("--out", metavar="FILE", help="CSV table for --sweep")
    p.add_argument("--workers", type=int, default=None, metavar="N")
    p.set_defaults(func=cmd_coverage)

    p = commands.add_parser("bench", help="runtime scaling measurement")
    p.add_argument("--sizes", default="128,256,512", metavar="LIST",
                   help="comma-separated frame sides (default 128,256,512)")
    p.add_argument("--reps", type=int, default=5, metavar="N")
    p.add_argument("--workers", type=int, default=None, metavar="N")
    p.add_argument("--out", metavar="FILE", help="write the report as JSON")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except RadfuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
