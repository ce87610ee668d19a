"""Command-line interface.

Subcommands: simulate (synthetic stacks), reconstruct (super-resolved
indicator images), svplot (singular-value export), cardinality
(signal-subspace size maps), evaluate (resolution/contrast metrics).
Every artifact gets a <name>.manifest.json sidecar recording the exact
invocation, inputs and timings.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .indicator import IndicatorConfig, ThresholdSpec
from .manifest import build_manifest, file_digest, write_manifest
from .metrics import (
    BAND_FRACTION,
    LinePairGeometry,
    RAYLEIGH_RATIO,
    RingPairGeometry,
    contrast,
    resolution,
    ring_pair_ratio,
    upsample_mean_image,
)
from .psf import PsfModel
from .reconstruct import (
    ReconstructionConfig,
    ReconstructionEngine,
    display_transform,
    to_uint8,
    to_uint16,
)
from .simulate import (
    DetectorSpec,
    Photokinetics,
    load_ground_truth,
    save_ground_truth,
    scene_kinds,
    simulate_stack,
)
from .stack_io import load_image, load_stack, save_image, save_stack


class CliError(Exception):
    """User-facing failure with a chosen exit code."""

    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


def parse_threshold(method: str, text: str) -> ThresholdSpec:
    """Map --method/--threshold to a scheme.

    A and B are the hard rules, "soft" selects the ramp, and a number is
    a manual hard cutoff given as log10(sigma0).
    """
    t = text.strip()
    if t in ("A", "B"):
        return ThresholdSpec(f"{method}_hard", rule=t)
    if t.lower() == "soft":
        return ThresholdSpec(f"{method}_soft")
    try:
        log_sigma = float(t)
    except ValueError:
        raise CliError(
            f"--threshold must be A, B, soft or a log10 cutoff, got {text!r}", 2
        ) from None
    return ThresholdSpec(f"{method}_hard", rule="manual", sigma0=10.0**log_sigma)


def _parse_window_filter(text: str | None) -> float | None:
    if text is None:
        return None
    key, _, value = text.partition("=")
    if key.strip() != "minmean" or not value:
        raise CliError(
            f"--threshold-window-filter expects minmean=<value>, got {text!r}", 2
        )
    return float(value)


def _float_list(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


# ---------------------------------------------------------------- parsers


def _add_calibration(p):
    g = p.add_argument_group("calibration")
    g.add_argument("--pixel-size-nm", type=float, default=80.0)
    g.add_argument("--wavelength-nm", type=float, default=665.0)
    g.add_argument("--na", type=float, default=1.42)


def _add_psf(p):
    g = p.add_argument_group("psf model")
    g.add_argument("--psf", choices=("gaussian", "airy"), default="gaussian")
    g.add_argument("--defocus-scale", type=float, default=1.4)


def _add_engine(p):
    g = p.add_argument_group("engine")
    g.add_argument("--window-size", type=int, default=None,
                   help="odd window side in pixels (default: from the PSF)")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--backend", choices=("auto", "compiled", "pure"),
                   default="auto")
    g.add_argument("--threshold-window-filter", default=None, metavar="minmean=V",
                   help="drop windows with mean intensity below V from the "
                        "threshold statistics")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="musical",
        description="Eigenimage-based super-resolution from fluctuation stacks",
    )
    parser.add_argument("--version", action="version", version=f"musical {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)
    submap = {}

    p = subs.add_parser("simulate", help="render a synthetic blinking-emitter stack")
    p.add_argument("--scene", choices=scene_kinds(), required=True)
    p.add_argument("--out", required=True, help="output stack (multi-page TIFF)")
    p.add_argument("--ground-truth", default=None, help="emitter CSV to write")
    p.add_argument("--export-mean", default=None,
                   help="float32 TIFF of the temporal mean image")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--frames", type=int, default=500)
    p.add_argument("--exposure-ms", type=float, default=10.0)
    p.add_argument("--duty", type=float, default=0.05,
                   help="on-state fraction of the blinking cycle")
    p.add_argument("--tau-on-ms", type=float, default=10.0)
    p.add_argument("--photon-rate", type=float, default=100.0,
                   help="photons per ms while on")
    p.add_argument("--sbr", type=float, default=4.0,
                   help="(background+peak)/background target; 0 disables background")
    p.add_argument("--background", type=float, default=None,
                   help="photons/pixel/frame, overrides --sbr")
    p.add_argument("--no-noise", action="store_true")
    p.add_argument("--poisson-counts", action="store_true",
                   help="draw emitter counts instead of rounding density*measure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--angle-deg", type=float, default=60.0)
    p.add_argument("--line-length-um", type=float, default=4.0)
    p.add_argument("--line-density-per-um", type=float, default=500.0)
    p.add_argument("--circle-diameter-nm", type=float, default=200.0)
    p.add_argument("--circle-gap-nm", type=float, default=150.0)
    p.add_argument("--circle-density-per-um", type=float, default=500.0)
    p.add_argument("--vesicle-diameters-nm", default="150,200,250,300")
    p.add_argument("--vesicle-density-per-um2", type=float, default=800.0)
    p.add_argument("--tube-density-per-um", type=float, default=800.0)
    p.add_argument("--tube-diameter-nm", type=float, default=None,
                   help="default 30 for microtubules, 300 for mitochondria")
    p.add_argument("--debris-density-per-um3", type=float, default=1000.0)
    p.add_argument("--z-span-nm", type=float, default=1000.0)
    p.add_argument("--z-sep-nm", type=float, default=500.0)
    p.add_argument("--mito-density-per-um2", type=float, default=3000.0)
    p.add_argument("--mito-z-offsets-nm", default="0,300,-300")
    _add_calibration(p)
    _add_psf(p)
    p.add_argument("--config", default=None, help="key=value or JSON defaults file")
    p.set_defaults(func=cmd_simulate)
    submap["simulate"] = p

    p = subs.add_parser("reconstruct", help="compute a super-resolved indicator image")
    p.add_argument("--input", required=True, help="stack TIFF")
    p.add_argument("--out", default=None,
                   help="display image; .tif scales to uint16, .png to uint8")
    p.add_argument("--export-raw", default=None, help="float32 TIFF of raw values")
    p.add_argument("--export-sv", default=None, help="singular-value CSV")
    p.add_argument("--export-cardinality", default=None,
                   help="PNG of signal-subspace sizes (hard thresholds only)")
    p.add_argument("--method", choices=("musical", "ev"), default="musical")
    p.add_argument("--threshold", default="B",
                   help="A, B, soft, or a manual log10 cutoff (default B)")
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--subpixels", type=int, default=10)
    p.add_argument("--epsilon-floor", type=float, default=1e-12)
    p.add_argument("--log-display", action="store_true",
                   help="compress display output to log10(1+1000 x/max)")
    _add_calibration(p)
    _add_psf(p)
    _add_engine(p)
    p.add_argument("--config", default=None, help="key=value or JSON defaults file")
    p.set_defaults(func=cmd_reconstruct)
    submap["reconstruct"] = p

    p = subs.add_parser("svplot", help="export per-window singular values")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="CSV: row,col,order,sigma,log10_sigma")
    p.add_argument("--png", default=None, help="optional spectrum heat map")
    _add_calibration(p)
    _add_psf(p)
    _add_engine(p)
    p.add_argument("--config", default=None, help="key=value or JSON defaults file")
    p.set_defaults(func=cmd_svplot)
    submap["svplot"] = p

    p = subs.add_parser("cardinality", help="map the signal-subspace size per window")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="PNG scaled over [0, M]")
    p.add_argument("--csv", default=None, help="optional CSV of raw counts")
    p.add_argument("--threshold", default="A",
                   help="A, B or a manual log10 cutoff (soft is an error)")
    _add_calibration(p)
    _add_psf(p)
    _add_engine(p)
    p.add_argument("--config", default=None, help="key=value or JSON defaults file")
    p.set_defaults(func=cmd_cardinality)
    submap["cardinality"] = p

    p = subs.add_parser("evaluate", help="resolution/contrast metrics on an image")
    p.add_argument("--recon", required=True,
                   help="reconstruction or mean image (linear scaling)")
    p.add_argument("--target", choices=("lines", "circles"), required=True)
    p.add_argument("--ground-truth", default=None,
                   help="emitter CSV; centers the target geometry when given")
    p.add_argument("--out", default=None, help="ratio-curve CSV (lines target)")
    p.add_argument("--image-pixel-size-nm", type=float, default=None,
                   help="grid pitch of the input image; default pixel/subpixels")
    p.add_argument("--pixel-size-nm", type=float, default=80.0)
    p.add_argument("--subpixels", type=int, default=10)
    p.add_argument("--upsample", type=int, default=1,
                   help="bilinear-upsample the image by this factor first "
                        "(for coarse mean images)")
    p.add_argument("--angle-deg", type=float, default=60.0)
    p.add_argument("--gap-nm", type=float, default=150.0,
                   help="edge-to-edge gap of the circle pair")
    p.add_argument("--center-x-nm", type=float, default=None)
    p.add_argument("--center-y-nm", type=float, default=None)
    p.add_argument("--max-x-nm", type=float, default=None)
    p.add_argument("--band-fraction", type=float, default=BAND_FRACTION)
    p.add_argument("--sustain", type=int, default=3)
    p.add_argument("--ratio-threshold", type=float, default=RAYLEIGH_RATIO)
    p.add_argument("--config", default=None, help="key=value or JSON defaults file")
    p.set_defaults(func=cmd_evaluate)
    submap["evaluate"] = p

    return parser, submap


# ------------------------------------------------------------ config files


def _read_config(path) -> dict:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise CliError(f"{path}: JSON config must be an object", 2)
        return {str(k).replace("-", "_"): v for k, v in data.items()}
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CliError(f"{path}:{lineno}: expected key = value", 2)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(action, value):
    if isinstance(value, str) and isinstance(action, argparse._StoreTrueAction):
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise CliError(f"config key {action.dest}: expected a boolean, got {value!r}", 2)
    if action.type is not None and isinstance(value, str):
        return action.type(value)
    return value


def _apply_config(subparser, argv_rest):
    """Load --config values as parser defaults; explicit flags then win."""
    peek = argparse.ArgumentParser(add_help=False)
    peek.add_argument("--config", default=None)
    ns, _ = peek.parse_known_args(argv_rest)
    if ns.config is None:
        return
    cfg = _read_config(ns.config)
    actions = {a.dest: a for a in subparser._actions}
    unknown = sorted(set(cfg) - set(actions))
    if unknown:
        raise CliError(f"{ns.config}: unknown config keys: {', '.join(unknown)}", 2)
    defaults = {}
    for key, value in cfg.items():
        action = actions[key]
        if action.choices and value not in action.choices:
            raise CliError(
                f"{ns.config}: {key} must be one of {tuple(action.choices)}", 2
            )
        defaults[key] = _coerce(action, value)
    subparser.set_defaults(**defaults)


# ------------------------------------------------------------- subcommands


def _psf_from_args(args) -> PsfModel:
    return PsfModel(
        kind=args.psf,
        wavelength=args.wavelength_nm,
        numerical_aperture=args.na,
        defocus_scale=args.defocus_scale,
    )


def _scene_params(args) -> dict:
    if args.scene == "lines":
        return {
            "angle_deg": args.angle_deg,
            "length_nm": args.line_length_um * 1000.0,
            "density_per_um": args.line_density_per_um,
        }
    if args.scene == "circles":
        return {
            "diameter_nm": args.circle_diameter_nm,
            "gap_nm": args.circle_gap_nm,
            "density_per_um": args.circle_density_per_um,
        }
    if args.scene == "vesicles":
        return {
            "diameters_nm": _float_list(args.vesicle_diameters_nm),
            "density_per_um2": args.vesicle_density_per_um2,
        }
    if args.scene == "microtubules":
        params = {
            "density_per_um": args.tube_density_per_um,
            "debris_per_um3": args.debris_density_per_um3,
            "z_span_nm": args.z_span_nm,
            "z_sep_nm": args.z_sep_nm,
        }
        if args.tube_diameter_nm is not None:
            params["tube_diameter_nm"] = args.tube_diameter_nm
        return params
    params = {
        "density_per_um2": args.mito_density_per_um2,
        "z_offsets_nm": _float_list(args.mito_z_offsets_nm),
    }
    if args.tube_diameter_nm is not None:
        params["tube_diameter_nm"] = args.tube_diameter_nm
    return params


def cmd_simulate(args) -> int:
    detector = DetectorSpec(
        width=args.width,
        height=args.height,
        pixel_size=args.pixel_size_nm,
        frames=args.frames,
        exposure=args.exposure_ms,
    )
    kinetics = Photokinetics.from_duty(
        args.duty, tau_on=args.tau_on_ms, photon_rate=args.photon_rate
    )
    psf_model = _psf_from_args(args)
    target_sbr = None if (args.background is not None or args.sbr == 0) else args.sbr
    t0 = time.perf_counter()
    stack, scene, info = simulate_stack(
        args.scene,
        detector,
        kinetics,
        psf_model,
        args.seed,
        target_sbr=target_sbr,
        background_rate=args.background,
        noise=not args.no_noise,
        poisson_counts=args.poisson_counts,
        scene_params=_scene_params(args),
    )
    elapsed = (time.perf_counter() - t0) * 1000.0
    save_stack(args.out, stack.frames)
    manifest = build_manifest(
        "simulate",
        _manifest_params(args),
        seed=args.seed,
        timings_ms={"simulate": elapsed},
        extra={
            "n_emitters": info.n_emitters,
            "background_rate": info.background_rate,
            "peak_signal": info.peak_signal,
            "sbr": None if np.isinf(info.sbr) else info.sbr,
            "duty": kinetics.duty,
        },
    )
    write_manifest(args.out, manifest)
    if args.export_mean:
        save_image(args.export_mean, stack.frames.mean(axis=0).astype(np.float32))
        write_manifest(args.export_mean, manifest)
    if args.ground_truth:
        save_ground_truth(args.ground_truth, scene)
        write_manifest(args.ground_truth, manifest)
    print(
        f"wrote {args.out}: {detector.frames} frames "
        f"{detector.height}x{detector.width}, {info.n_emitters} emitters, "
        f"background {info.background_rate:.4g} photons/px/frame"
    )
    return 0


def _recon_config(args) -> ReconstructionConfig:
    threshold = parse_threshold(getattr(args, "method", "musical"), args.threshold)
    return ReconstructionConfig(
        psf=_psf_from_args(args),
        threshold=threshold,
        indicator=IndicatorConfig(
            alpha=getattr(args, "alpha", 4.0),
            epsilon_floor=getattr(args, "epsilon_floor", 1e-12),
        ),
        window_side=args.window_size,
        subpixels=getattr(args, "subpixels", 10),
        min_window_mean=_parse_window_filter(args.threshold_window_filter),
        threads=args.threads,
        backend=None if args.backend == "auto" else args.backend,
    )


def _load_input_stack(args):
    return load_stack(
        args.input,
        pixel_size=args.pixel_size_nm,
        wavelength=args.wavelength_nm,
        numerical_aperture=args.na,
    )


def _describe_threshold(spec: ThresholdSpec) -> str:
    if spec.is_hard:
        tag = f"rule {spec.rule}" if spec.rule != "manual" else "manual"
        return (
            f"{spec.scheme} ({tag}): sigma0={spec.sigma0:.6g} "
            f"(log10 {np.log10(spec.sigma0):.4f})"
            if spec.sigma0 > 0
            else f"{spec.scheme} ({tag}): sigma0=0"
        )
    return (
        f"{spec.scheme}: sigma_min={spec.sigma_min:.6g} "
        f"sigma_max={spec.sigma_max:.6g} "
        f"(log10 {np.log10(spec.sigma_min):.4f}..{np.log10(spec.sigma_max):.4f})"
    )


def cmd_reconstruct(args) -> int:
    if not (args.out or args.export_raw or args.export_sv or args.export_cardinality):
        raise CliError("nothing to do: give --out or one of the --export-* paths", 2)
    stack = _load_input_stack(args)
    config = _recon_config(args)
    t0 = time.perf_counter()
    engine = ReconstructionEngine(stack, config)
    t1 = time.perf_counter()
    recon = engine.render()
    t2 = time.perf_counter()
    print(f"threshold {_describe_threshold(recon.threshold)}")
    manifest = build_manifest(
        "reconstruct",
        _manifest_params(args),
        inputs=[args.input],
        backend=engine.backend,
        threads=args.threads,
        timings_ms={
            "decompose": (t1 - t0) * 1000.0,
            "render": (t2 - t1) * 1000.0,
        },
        extra={
            "window_side": engine.window_side,
            "n_windows": engine.batch.n_windows,
            "threshold": _describe_threshold(recon.threshold),
        },
    )
    if args.out:
        display = display_transform(recon.image, log=args.log_display)
        if str(args.out).lower().endswith(".png"):
            save_image(args.out, to_uint8(display))
        else:
            save_image(args.out, to_uint16(display))
        write_manifest(args.out, manifest)
        print(f"wrote {args.out}")
    if args.export_raw:
        save_image(args.export_raw, recon.image.astype(np.float32))
        write_manifest(args.export_raw, manifest)
        print(f"wrote {args.export_raw}")
    if args.export_sv:
        engine.singular_values().to_csv(args.export_sv)
        write_manifest(args.export_sv, manifest)
        print(f"wrote {args.export_sv}")
    if args.export_cardinality:
        if not recon.threshold.is_hard:
            raise CliError("cardinality is undefined for soft thresholding", 2)
        card = engine.cardinality()
        save_image(
            args.export_cardinality,
            to_uint8(card.counts, top=card.n_components),
        )
        write_manifest(args.export_cardinality, manifest)
        print(f"wrote {args.export_cardinality}")
    return 0


def cmd_svplot(args) -> int:
    stack = _load_input_stack(args)
    args.threshold = "A"  # unused by the table; satisfies the shared config
    config = _recon_config(args)
    t0 = time.perf_counter()
    engine = ReconstructionEngine(stack, config)
    elapsed = (time.perf_counter() - t0) * 1000.0
    table = engine.singular_values()
    table.to_csv(args.out)
    manifest = build_manifest(
        "svplot",
        _manifest_params(args),
        inputs=[args.input],
        backend=engine.backend,
        threads=args.threads,
        timings_ms={"decompose": elapsed},
        extra={"n_windows": len(table.rows), "n_components": table.sigma.shape[1]},
    )
    write_manifest(args.out, manifest)
    print(
        f"wrote {args.out} ({len(table.rows)} windows x {table.sigma.shape[1]} components)"
    )
    if args.png:
        with np.errstate(divide="ignore"):
            spect = np.log10(np.maximum(table.sigma, 1e-300))
        save_image(args.png, to_uint8(spect))
        write_manifest(args.png, manifest)
        print(f"wrote {args.png}")
    return 0


def cmd_cardinality(args) -> int:
    if args.threshold.strip().lower() == "soft":
        raise CliError("cardinality is undefined for soft thresholding", 2)
    stack = _load_input_stack(args)
    args.method = "musical"  # cardinality depends only on the cutoff
    config = _recon_config(args)
    t0 = time.perf_counter()
    engine = ReconstructionEngine(stack, config)
    card = engine.cardinality()
    elapsed = (time.perf_counter() - t0) * 1000.0
    print(
        f"sigma0={card.sigma0:.6g}, counts in [{card.counts.min()}, "
        f"{card.counts.max()}] of M={card.n_components}"
    )
    save_image(args.out, to_uint8(card.counts, top=card.n_components))
    manifest = build_manifest(
        "cardinality",
        _manifest_params(args),
        inputs=[args.input],
        backend=engine.backend,
        threads=args.threads,
        timings_ms={"total": elapsed},
        extra={"sigma0": card.sigma0, "n_components": card.n_components},
    )
    write_manifest(args.out, manifest)
    print(f"wrote {args.out}")
    if args.csv:
        np.savetxt(args.csv, card.counts, delimiter=",", fmt="%d")
        write_manifest(args.csv, manifest)
        print(f"wrote {args.csv}")
    return 0


def cmd_evaluate(args) -> int:
    image = np.asarray(load_image(args.recon), dtype=np.float64)
    grid = (
        args.image_pixel_size_nm
        if args.image_pixel_size_nm is not None
        else args.pixel_size_nm / args.subpixels
    )
    if args.upsample > 1:
        image = upsample_mean_image(image, args.upsample)
        grid /= args.upsample
    height_nm = image.shape[0] * grid
    width_nm = image.shape[1] * grid
    cx, cy = width_nm / 2.0, height_nm / 2.0
    if args.ground_truth:
        # both targets are symmetric, so the centroid is the crossing
        # point / gap midpoint
        positions = load_ground_truth(args.ground_truth)
        cx, cy = float(positions[:, 0].mean()), float(positions[:, 1].mean())
    if args.center_x_nm is not None:
        cx = args.center_x_nm
    if args.center_y_nm is not None:
        cy = args.center_y_nm
    manifest_extra = {}
    if args.target == "lines":
        geom = LinePairGeometry(center=(cx, cy), half_angle_deg=args.angle_deg / 2.0)
        x_max = args.max_x_nm if args.max_x_nm is not None else 0.4 * width_nm
        result = resolution(
            image,
            grid,
            geom,
            x_max=x_max,
            threshold=args.ratio_threshold,
            sustain=args.sustain,
            band_fraction=args.band_fraction,
        )
        if result.separation is None:
            print("resolution_nm: unresolved")
        else:
            print(f"resolution_nm: {result.separation:.2f} (at x_nm {result.x:.1f})")
        manifest_extra = {
            "resolution_nm": result.separation,
            "x_nm": result.x,
        }
        if args.out:
            result.curve.to_csv(args.out)
            print(f"wrote {args.out}")
    else:
        geom = RingPairGeometry(center=(cx, cy), gap=args.gap_nm)
        value = contrast(image, grid, geom, band_fraction=args.band_fraction)
        if value is None:
            print("contrast: undefined")
        else:
            print(f"contrast: {value:.4f}")
        manifest_extra = {"contrast": value}
        if args.out:
            pt = ring_pair_ratio(image, grid, geom, band_fraction=args.band_fraction)
            table = np.array(
                [
                    [
                        0.0,
                        geom.gap,
                        pt.valley if pt else np.nan,
                        pt.peak_lo if pt else np.nan,
                        pt.peak_hi if pt else np.nan,
                        pt.ratio if pt else np.nan,
                    ]
                ]
            )
            np.savetxt(
                args.out,
                table,
                delimiter=",",
                header="x_nm,separation_nm,v,p1,p2,r",
                comments="",
                fmt="%.8g",
            )
            print(f"wrote {args.out}")
    if args.out:
        inputs = [args.recon]
        if args.ground_truth:
            inputs.append(args.ground_truth)
        write_manifest(
            args.out,
            build_manifest(
                "evaluate",
                _manifest_params(args),
                inputs=inputs,
                extra=manifest_extra,
            ),
        )
    return 0


def _manifest_params(args) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return params


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, submap = build_parser()
    try:
        if argv and argv[0] in submap:
            _apply_config(submap[argv[0]], argv[1:])
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
