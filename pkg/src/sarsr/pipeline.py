"""Experiment orchestration: load a clean reference, degrade it, restore it
with each selected method, and score the results.

The protocol generalizes the 256 -> 128 -> 256 evaluation: the input is the
clean image at scale 2N, speckle is added at 2N, the noisy image is shrunk to
N, every upscale method maps N back to 2N, and PSNR is computed against the
clean original. denoise-only is the exception: it despeckles the unshrunk
noisy image directly. All stages are seeded; two runs with the same config
produce byte-identical outputs.
"""

from dataclasses import dataclass, fields
from pathlib import Path

from . import _kernels
from .bpnn import TrainConfig, combined_sr
from .image_io import load_image, save_image
from .metrics import MetricsReport, Region, enl, find_homogeneous_region, psnr
from .nlmeans import KernelParams, WindowConfig, despeckle
from .resample import bicubic_upscale_2x, downsample_2x
from .speckle import SpeckleParams, add_speckle
from .sr import despeckle_then_upscale, sr_despeckle_upscale

METHODS = ("bicubic", "nlm-sr", "bpnn", "combined", "denoise-only")
UPSCALE_METHODS = ("bicubic", "nlm-sr", "bpnn", "combined")


class PipelineError(RuntimeError):
    """Component failure wrapped with the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage


@dataclass
class PipelineConfig:
    """Flat experiment configuration; every field has a documented default.

    ``seed`` is the master seed: the noise stage uses it directly and training
    uses seed + 1, unless noise_seed/train_seed override them explicitly.
    ``enl_region`` is empty for the auto rule (the enl_size x enl_size window
    of minimal clean-image variance), ``full`` for the whole image, or
    ``top,left,height,width``.
    """

    input: str = ""
    output_dir: str = "sarsr-out"
    method: str = "all"
    sigma: float = 0.2
    noise_distribution: str = "uniform"
    seed: int = 0
    noise_seed: int = None
    train_seed: int = None
    epsilon: float = 1e-4
    patch_radius: int = 2
    search_radius: int = 8
    boundary: str = "reflect"
    kernel: str = "combined"
    h: float = 0.35
    h1: float = 0.35
    h2: float = 6.0
    cap_self_weight: bool = False
    cross_scale_patches: bool = False
    two_stage_sr: bool = False
    downsample: str = "mean"
    hidden_size: int = 12
    learning_rate: float = 0.05
    epochs: int = 40
    shuffle: bool = True
    enl_region: str = "full"
    enl_size: int = 32
    sample_variance: bool = False
    threads: int = 0

    def methods(self):
        names = METHODS if self.method == "all" else tuple(
            m.strip() for m in self.method.split(",") if m.strip()
        )
        for name in names:
            if name not in METHODS:
                raise ValueError(f"unknown method {name!r}, expected one of {METHODS}")
        if not names:
            raise ValueError("no method selected")
        return names

    def window(self):
        return WindowConfig(self.patch_radius, self.search_radius, self.boundary)

    def kernel_params(self):
        return KernelParams(self.kernel, self.h, self.h1, self.h2)

    def speckle_params(self):
        seed = self.seed if self.noise_seed is None else self.noise_seed
        return SpeckleParams(self.sigma, seed, self.noise_distribution)

    def train_config(self):
        seed = self.seed + 1 if self.train_seed is None else self.train_seed
        return TrainConfig(self.learning_rate, self.epochs, seed, self.shuffle, self.hidden_size)

    def region_for(self, clean):
        if self.enl_region == "":
            return find_homogeneous_region(clean, self.enl_size)
        if self.enl_region == "full":
            return Region.full(clean)
        parts = self.enl_region.split(",")
        if len(parts) != 4:
            raise ValueError(
                f"enl_region must be '', 'full' or 'top,left,height,width', got {self.enl_region!r}"
            )
        return Region(*(int(p) for p in parts))


_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _convert(key, value, target_type):
    if target_type is bool:
        try:
            return _BOOL_WORDS[value.strip().lower()]
        except KeyError:
            raise ValueError(f"config key {key}: expected a boolean, got {value!r}") from None
    try:
        return target_type(value.strip())
    except ValueError:
        raise ValueError(
            f"config key {key}: expected {target_type.__name__}, got {value!r}"
        ) from None


def parse_config(text, overrides=None):
    """Parse the flat key=value config format. '#' starts a comment; unknown
    keys are errors so typos fail loudly. ``overrides`` maps key -> string."""
    schema = {f.name for f in fields(PipelineConfig)}
    defaults = PipelineConfig()
    cfg = PipelineConfig()
    assignments = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in schema:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        assignments[key] = value
    if overrides:
        for key, value in overrides.items():
            if key not in schema:
                raise ValueError(f"override: unknown key {key!r}")
            assignments[key] = value
    for key, value in assignments.items():
        default = getattr(defaults, key)
        target = int if key in ("noise_seed", "train_seed") else type(default)
        setattr(cfg, key, _convert(key, value, target))
    return cfg


def load_config(path, overrides=None):
    return parse_config(Path(path).read_text(encoding="utf-8"), overrides)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_experiment(cfg):
    """Run the configured methods and emit images plus CSV/text reports.

    Written to output_dir: clean.pgm, noisy.pgm, low.pgm, one <method>.pgm per
    method, report.csv, report.txt. Returns the MetricsReport.
    """
    if not cfg.input:
        raise PipelineError("config", ValueError("input image path is required"))
    _kernels.configure_threads(cfg.threads)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    clean = _stage("load", load_image, cfg.input)
    if clean.shape[0] % 2 or clean.shape[1] % 2:
        raise PipelineError(
            "load", ValueError(f"input dimensions must be even, got {clean.shape}")
        )
    noisy = _stage("add-noise", add_speckle, clean, cfg.speckle_params())
    low = _stage("downsample", downsample_2x, noisy, cfg.downsample)

    region = _stage("enl-region", cfg.region_for, clean)
    window = cfg.window()
    kparams = cfg.kernel_params()

    def evaluate(name, img):
        return (
            name,
            _stage(f"psnr[{name}]", psnr, img, clean),
            _stage(f"enl[{name}]", enl, img, region, cfg.sample_variance),
        )

    clean_enl = _stage("enl[clean]", enl, clean, region, cfg.sample_variance)
    report = MetricsReport([], clean_enl, region)
    report.add("clean", None, clean_enl)
    report.add(*evaluate("noisy", noisy))

    _stage("emit", save_image, clean, out_dir / "clean.pgm")
    _stage("emit", save_image, noisy, out_dir / "noisy.pgm")
    _stage("emit", save_image, low, out_dir / "low.pgm")

    for method in cfg.methods():
        result = _stage(method, _run_method, method, cfg, window, kparams, noisy, low)
        report.add(*evaluate(method, result))
        _stage("emit", save_image, result, out_dir / f"{method}.pgm")

    (out_dir / "report.csv").write_text(report.to_csv(), encoding="ascii")
    (out_dir / "report.txt").write_text(report.to_text(), encoding="ascii")
    return report


def _run_method(method, cfg, window, kparams, noisy, low):
    if method == "bicubic":
        return bicubic_upscale_2x(low, cfg.boundary)
    if method == "nlm-sr":
        upscale = despeckle_then_upscale if cfg.two_stage_sr else sr_despeckle_upscale
        return upscale(
            low, window, kparams, cfg.epsilon, cfg.cross_scale_patches, cfg.downsample
        )
    if method in ("bpnn", "combined"):
        return combined_sr(
            low,
            window,
            kparams,
            cfg.epsilon,
            cfg.train_config(),
            feature_mode="nlm" if method == "combined" else "nearest",
            downsample_mode=cfg.downsample,
        )
    if method == "denoise-only":
        return despeckle(noisy, window, kparams, cfg.epsilon, cfg.cap_self_weight)
    raise ValueError(f"unknown method {method!r}")
