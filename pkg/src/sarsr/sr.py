"""Cross-scale NL-means 2x super-resolution.

The search window lives in the half-scale image: for a parent pixel x of the
input, candidates y are searched around floor(x/2) in the shrunk image, but
similarity is still measured between full-scale neighborhoods (patch at x vs
patch at 2y). Every candidate y owns a child quad -- the four input pixels at
2y -- and the output child quad of x is the weight-averaged blend of the
candidates' quads, one weighted sum per quad slot.
"""

import numpy as np

from . import _kernels
from .nlmeans import despeckle
from .resample import downsample_2x, pad_image
from .speckle import DEFAULT_EPSILON, from_log_domain, to_log_domain
from .validation import check_image


def child_coords(parent):
    """The four fine-grid coordinates covered by a coarse pixel (i, j), in
    row-major order: (2i,2j), (2i,2j+1), (2i+1,2j), (2i+1,2j+1)."""
    i, j = parent
    return ((2 * i, 2 * j), (2 * i, 2 * j + 1), (2 * i + 1, 2 * j), (2 * i + 1, 2 * j + 1))


def _check_sr_input(img, cfg):
    h, w = img.shape
    if h % 2 or w % 2:
        raise ValueError(f"sr_upscale_2x requires even dimensions, got {h}x{w}")
    side = 2 * (2 * cfg.patch_radius + 1)
    if h < side or w < side:
        raise ValueError(
            f"sr_upscale_2x: image {h}x{w} too small for patch radius "
            f"{cfg.patch_radius} (needs at least {side}x{side})"
        )


def sr_upscale_2x(img, cfg, params, cross_scale_patches=False, downsample_mode="mean"):
    """Upscale to double size by searching the shrunk image and blending
    child quads read from the input. Output is (2H)x(2W)."""
    img = check_image(img)
    _check_sr_input(img, cfg)
    low = downsample_2x(img, downsample_mode)
    r = cfg.patch_radius
    big_r = cfg.search_radius
    pad_img = 2 * big_r + max(r, 1)
    pad_low = big_r + r
    return _kernels.sr_filter(
        pad_image(img, pad_img, cfg.boundary),
        pad_image(low, pad_low, cfg.boundary),
        img.shape[0],
        img.shape[1],
        pad_img,
        pad_low,
        r,
        big_r,
        _kernels.KIND_CODES[params.kind],
        params.h,
        params.h1,
        params.h2,
        cross_scale_patches,
    )


def sr_weight_sums(img, cfg, params, cross_scale_patches=False, downsample_mode="mean"):
    """Per-parent (normalized weight sum, normalizer Z) for sr_upscale_2x;
    Z == 0 marks parents whose quad fell back to the search-center copy."""
    img = check_image(img)
    _check_sr_input(img, cfg)
    low = downsample_2x(img, downsample_mode)
    r = cfg.patch_radius
    big_r = cfg.search_radius
    pad_img = 2 * big_r + max(r, 1)
    pad_low = big_r + r
    return _kernels.sr_weight_sums(
        pad_image(img, pad_img, cfg.boundary),
        pad_image(low, pad_low, cfg.boundary),
        img.shape[0],
        img.shape[1],
        pad_img,
        pad_low,
        r,
        big_r,
        _kernels.KIND_CODES[params.kind],
        params.h,
        params.h1,
        params.h2,
        cross_scale_patches,
    )


def sr_despeckle_upscale(
    img,
    cfg,
    params,
    epsilon=DEFAULT_EPSILON,
    cross_scale_patches=False,
    downsample_mode="mean",
):
    """Super-resolve and despeckle in one pass: the upscaler runs in the log
    domain, so the candidate averaging that builds each child quad doubles as
    the multiplicative-noise suppressor."""
    log_out = sr_upscale_2x(
        to_log_domain(img, epsilon), cfg, params, cross_scale_patches, downsample_mode
    )
    return from_log_domain(log_out, epsilon)


def despeckle_then_upscale(
    img,
    cfg,
    params,
    epsilon=DEFAULT_EPSILON,
    cross_scale_patches=False,
    downsample_mode="mean",
):
    """Two-stage ablation: despeckle first, then upscale the clean image."""
    clean = despeckle(img, cfg, params, epsilon)
    return sr_upscale_2x(
        np.clip(clean, 0.0, None), cfg, params, cross_scale_patches, downsample_mode
    )
