"""NL-means denoising with three similarity kernels, plus the log-domain
despeckling wrapper.

Each output pixel is a weighted mean of the pixels in its search window; the
weight of a candidate comes from the patch distance between the two
neighborhood windows, pushed through one of three kernels:

    exp       w = exp(-d / h^2)
    cosine    w = cos(pi d / 2h)             for d <= h, else 0
    combined  w = exp(cos(pi d / 2 h1) h2)   for d <= h1, else 0

Patch distance here is the per-pixel mean of squared differences (not the raw
sum), which decouples the h scale from the patch size; translating an
h tuned for raw sums means dividing d by (2r+1)^2.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .speckle import DEFAULT_EPSILON, from_log_domain, to_log_domain
from .validation import KERNEL_KINDS, check_boundary, check_image
from .resample import pad_image, sample_with_boundary


@dataclass(frozen=True)
class WindowConfig:
    """Patch (neighborhood) radius, search radius, and border handling.

    The neighborhood window is (2*patch_radius+1)^2 and the search window is
    (2*search_radius+1)^2; the two radii are independent.
    """

    patch_radius: int = 2
    search_radius: int = 8
    boundary: str = "reflect"

    def __post_init__(self):
        if self.patch_radius < 0:
            raise ValueError(f"patch_radius must be >= 0, got {self.patch_radius}")
        if self.search_radius < 0:
            raise ValueError(f"search_radius must be >= 0, got {self.search_radius}")
        check_boundary(self.boundary)


@dataclass(frozen=True)
class KernelParams:
    """Similarity kernel selector and its smoothing constants.

    h scales the exp and cosine kernels (note the differing powers: exp
    divides by h^2, cosine by h); h1 is the combined kernel's distance cutoff
    and h2 its exponent scale.
    """

    kind: str = "combined"
    h: float = 0.35
    h1: float = 0.35
    h2: float = 6.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        for name in ("h", "h1", "h2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


def patch_distance(img_a, center_a, img_b, center_b, cfg):
    """Mean squared intensity difference between two neighborhood windows.

    Centers must lie inside their images; window samples that fall outside are
    remapped by the boundary policy. Exactly symmetric in its two patches.
    """
    img_a = check_image(img_a, "img_a")
    img_b = check_image(img_b, "img_b")
    ai, aj = center_a
    bi, bj = center_b
    if not (0 <= ai < img_a.shape[0] and 0 <= aj < img_a.shape[1]):
        raise ValueError(f"center_a {center_a} outside image of shape {img_a.shape}")
    if not (0 <= bi < img_b.shape[0] and 0 <= bj < img_b.shape[1]):
        raise ValueError(f"center_b {center_b} outside image of shape {img_b.shape}")
    r = cfg.patch_radius
    s = 0.0
    for py in range(-r, r + 1):
        for px in range(-r, r + 1):
            diff = sample_with_boundary(img_a, ai + py, aj + px, cfg.boundary) - \
                sample_with_boundary(img_b, bi + py, bj + px, cfg.boundary)
            s += diff * diff
    return s / ((2 * r + 1) ** 2)


def kernel_weight(d, params):
    """Unnormalized similarity weight for a patch distance (scalar or array)."""
    d = np.asarray(d, dtype=np.float64)
    if np.any(d < 0.0):
        raise ValueError("patch distance must be non-negative")
    if params.kind == "exp":
        w = np.exp(-d / (params.h * params.h))
    elif params.kind == "cosine":
        w = np.where(d <= params.h, np.cos(np.pi * d / (2.0 * params.h)), 0.0)
    else:
        w = np.where(
            d <= params.h1,
            np.exp(np.cos(np.pi * d / (2.0 * params.h1)) * params.h2),
            0.0,
        )
    return float(w) if w.ndim == 0 else w


def _check_min_size(img, cfg, op):
    side = 2 * cfg.patch_radius + 1
    if img.shape[0] < side or img.shape[1] < side:
        raise ValueError(
            f"{op}: image {img.shape[0]}x{img.shape[1]} too small for "
            f"patch radius {cfg.patch_radius} ({side}x{side} window)"
        )


def denoise(img, cfg, params, cap_self_weight=False):
    """Classic NL-means: every pixel becomes the normalized weighted mean of
    its search-window candidates (the pixel itself included, at distance 0).

    With cap_self_weight the center's weight is replaced by the maximum
    candidate weight, the classic variant. If every candidate weight is zero
    (cutoff kernels), the center pixel passes through unchanged.
    """
    img = check_image(img)
    _check_min_size(img, cfg, "denoise")
    padded = pad_image(img, cfg.search_radius + cfg.patch_radius, cfg.boundary)
    return _kernels.nlm_filter(
        padded,
        img.shape[0],
        img.shape[1],
        cfg.search_radius + cfg.patch_radius,
        cfg.patch_radius,
        cfg.search_radius,
        _kernels.KIND_CODES[params.kind],
        params.h,
        params.h1,
        params.h2,
        cap_self_weight,
    )


def denoise_weight_sums(img, cfg, params, cap_self_weight=False):
    """Per-pixel (normalized weight sum, normalizer Z) for the denoise pass.

    Z == 0 marks pixels that took the degenerate fallback; everywhere else the
    normalized sum should be 1 up to roundoff.
    """
    img = check_image(img)
    _check_min_size(img, cfg, "denoise")
    padded = pad_image(img, cfg.search_radius + cfg.patch_radius, cfg.boundary)
    return _kernels.nlm_weight_sums(
        padded,
        img.shape[0],
        img.shape[1],
        cfg.search_radius + cfg.patch_radius,
        cfg.patch_radius,
        cfg.search_radius,
        _kernels.KIND_CODES[params.kind],
        params.h,
        params.h1,
        params.h2,
        cap_self_weight,
    )


def despeckle(img, cfg, params, epsilon=DEFAULT_EPSILON, cap_self_weight=False):
    """Log-domain NL-means for multiplicative noise: log, denoise, exp."""
    return from_log_domain(
        denoise(to_log_domain(img, epsilon), cfg, params, cap_self_weight), epsilon
    )
