"""Command-line interface.

Subcommands: add-noise, denoise, downsample, upscale, metrics, experiment.
Stochastic stages (noise injection, network training) never seed from the
wall clock: --seed is mandatory wherever randomness is involved. Exit codes:
0 success, 1 stage/component error, 2 usage error.
"""

import argparse
import sys

from . import _kernels
from .bpnn import TrainConfig, combined_sr
from .image_io import load_image, save_image
from .metrics import MetricsReport, Region, enl, find_homogeneous_region, psnr
from .nlmeans import KernelParams, WindowConfig, despeckle
from .pipeline import (
    PipelineError,
    UPSCALE_METHODS,
    load_config,
    run_experiment,
)
from .resample import bicubic_upscale_2x, downsample_2x
from .speckle import SpeckleParams, add_speckle
from .sr import despeckle_then_upscale, sr_despeckle_upscale


def _add_window_args(p):
    p.add_argument("--patch-radius", type=int, default=2, help="neighborhood radius r; window is (2r+1)^2")
    p.add_argument("--search-radius", type=int, default=8, help="search radius R; window is (2R+1)^2")
    p.add_argument("--boundary", choices=("reflect", "clamp"), default="reflect")
    p.add_argument("--kernel", choices=("exp", "cosine", "combined"), default="combined")
    p.add_argument("--h", type=float, default=0.35, help="smoothing for exp/cosine kernels")
    p.add_argument("--h1", type=float, default=0.35, help="distance cutoff of the combined kernel")
    p.add_argument("--h2", type=float, default=6.0, help="exponent scale of the combined kernel")
    p.add_argument("--epsilon", type=float, default=1e-4, help="log-domain offset")
    p.add_argument("--threads", type=int, default=0, help="kernel threads (0 = all available)")


def _window(args):
    return (
        WindowConfig(args.patch_radius, args.search_radius, args.boundary),
        KernelParams(args.kernel, args.h, args.h1, args.h2),
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sarsr",
        description="Speckle-aware single-image 2x super-resolution toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-noise", help="add seeded multiplicative speckle")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--distribution", choices=("uniform", "gaussian"), default="uniform")
    p.add_argument("--seed", type=int, required=True, help="mandatory: no wall-clock seeding")

    p = sub.add_parser("denoise", help="log-domain NL-means despeckling")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--cap-self-weight", action="store_true")
    _add_window_args(p)

    p = sub.add_parser("downsample", help="halve both dimensions")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--mode", choices=("mean", "decimate"), default="mean")

    p = sub.add_parser("upscale", help="2x upscale with the selected method")
    p.add_argument("--method", choices=UPSCALE_METHODS, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, help="mandatory for bpnn/combined (network training)")
    p.add_argument("--hidden-size", type=int, default=12)
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--epochs", type=int, default=40)
    p.add_argument("--cross-scale-patches", action="store_true")
    p.add_argument("--two-stage", action="store_true", help="despeckle first, then upscale (nlm-sr only)")
    _add_window_args(p)

    p = sub.add_parser("metrics", help="PSNR/ENL of a test image")
    p.add_argument("--test", required=True)
    p.add_argument("--ref", help="clean reference; omit for reference-free runs (ENL only)")
    p.add_argument("--region", help="ENL region as top,left,height,width (default: auto)")
    p.add_argument("--enl-size", type=int, default=32, help="auto region window size")
    p.add_argument("--sample-variance", action="store_true")
    p.add_argument("--csv", help="also write the report as CSV to this path")

    p = sub.add_parser("experiment", help="full degrade/restore/score protocol from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the config's master seed")
    p.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        help="override any config key (repeatable)",
    )
    return parser


def _cmd_add_noise(args):
    img = load_image(args.input)
    out = add_speckle(img, SpeckleParams(args.sigma, args.seed, args.distribution))
    save_image(out, args.output)


def _cmd_denoise(args):
    _kernels.configure_threads(args.threads)
    cfg, params = _window(args)
    out = despeckle(load_image(args.input), cfg, params, args.epsilon, args.cap_self_weight)
    save_image(out, args.output)


def _cmd_downsample(args):
    save_image(downsample_2x(load_image(args.input), args.mode), args.output)


def _cmd_upscale(args):
    _kernels.configure_threads(args.threads)
    cfg, params = _window(args)
    img = load_image(args.input)
    if args.method == "bicubic":
        out = bicubic_upscale_2x(img, args.boundary)
    elif args.method == "nlm-sr":
        upscale = despeckle_then_upscale if args.two_stage else sr_despeckle_upscale
        out = upscale(img, cfg, params, args.epsilon, args.cross_scale_patches)
    else:
        if args.seed is None:
            raise ValueError(f"--seed is required for method {args.method} (network training)")
        tcfg = TrainConfig(args.learning_rate, args.epochs, args.seed, True, args.hidden_size)
        out = combined_sr(
            img,
            cfg,
            params,
            args.epsilon,
            tcfg,
            feature_mode="nlm" if args.method == "combined" else "nearest",
        )
    save_image(out, args.output)


def _cmd_metrics(args):
    test = load_image(args.test)
    ref = load_image(args.ref) if args.ref else None
    if args.region:
        parts = args.region.split(",")
        if len(parts) != 4:
            raise ValueError("--region must be top,left,height,width")
        region = Region(*(int(p) for p in parts))
    else:
        region = find_homogeneous_region(ref if ref is not None else test, args.enl_size)
    rows = []
    ref_enl = None
    if ref is not None:
        ref_enl = enl(ref, region, args.sample_variance)
        rows.append(("reference", None, ref_enl))
    rows.append(
        (
            "test",
            psnr(test, ref) if ref is not None else None,
            enl(test, region, args.sample_variance),
        )
    )
    report = MetricsReport(rows, ref_enl if ref_enl is not None else float("nan"), region)
    sys.stdout.write(report.to_text())
    if args.csv:
        with open(args.csv, "w", encoding="ascii") as fh:
            fh.write(report.to_csv())


def _cmd_experiment(args):
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    cfg = load_config(args.config, overrides)
    report = run_experiment(cfg)
    sys.stdout.write(report.to_text())


_COMMANDS = {
    "add-noise": _cmd_add_noise,
    "denoise": _cmd_denoise,
    "downsample": _cmd_downsample,
    "upscale": _cmd_upscale,
    "metrics": _cmd_metrics,
    "experiment": _cmd_experiment,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except PipelineError as exc:
        print(f"sarsr {args.command}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"sarsr {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
