"""Speckle-aware single-image 2x super-resolution.

Pipeline pieces: multiplicative speckle simulation, log-domain NL-means
despeckling with three similarity kernels, a cross-scale NL-means upscaler
that searches the shrunk image and blends child quads, and a small
backpropagation network trained on the image's own coarse/fine pairs.
Evaluation is PSNR and ENL. Scikit-learn style estimators wrap the
functional core in `sarsr.estimators`.
"""

from .bpnn import (
    Mlp,
    TrainConfig,
    TrainingSet,
    build_training_set,
    combined_sr,
    forward,
    gradient_check,
    init_mlp,
    load_mlp,
    predict_upscale,
    save_mlp,
    train,
)
from .estimators import (
    BicubicUpscaler,
    BpnnUpscaler,
    NlmDenoiser,
    NlmUpscaler,
    SpeckleNoiser,
)
from .image_io import ImageFormatError, load_image, save_image
from .metrics import MetricsReport, Region, enl, find_homogeneous_region, psnr
from .nlmeans import (
    KernelParams,
    WindowConfig,
    denoise,
    despeckle,
    kernel_weight,
    patch_distance,
)
from .pipeline import PipelineConfig, PipelineError, load_config, parse_config, run_experiment
from .resample import (
    bicubic_upscale_2x,
    downsample_2x,
    nearest_upscale_2x,
    sample_with_boundary,
)
from .speckle import SpeckleParams, add_speckle, from_log_domain, to_log_domain
from .sr import child_coords, despeckle_then_upscale, sr_despeckle_upscale, sr_upscale_2x

__version__ = "0.1.0"

__all__ = [
    "BicubicUpscaler",
    "BpnnUpscaler",
    "ImageFormatError",
    "KernelParams",
    "MetricsReport",
    "Mlp",
    "NlmDenoiser",
    "NlmUpscaler",
    "PipelineConfig",
    "PipelineError",
    "Region",
    "SpeckleNoiser",
    "SpeckleParams",
    "TrainConfig",
    "TrainingSet",
    "WindowConfig",
    "add_speckle",
    "bicubic_upscale_2x",
    "build_training_set",
    "child_coords",
    "combined_sr",
    "denoise",
    "despeckle",
    "despeckle_then_upscale",
    "downsample_2x",
    "enl",
    "find_homogeneous_region",
    "forward",
    "from_log_domain",
    "gradient_check",
    "init_mlp",
    "kernel_weight",
    "load_config",
    "load_image",
    "load_mlp",
    "nearest_upscale_2x",
    "parse_config",
    "patch_distance",
    "predict_upscale",
    "psnr",
    "run_experiment",
    "sample_with_boundary",
    "save_image",
    "save_mlp",
    "sr_despeckle_upscale",
    "sr_upscale_2x",
    "to_log_domain",
    "train",
]
