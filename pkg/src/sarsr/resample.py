"""Grid resampling primitives: boundary-extended sampling, 2x downsampling,
and the bicubic (Catmull-Rom) 2x baseline upscaler.

Upscaled grids are top-left anchored: output pixel (2i+di, 2j+dj) with
di,dj in {0,1} covers input pixel (i,j), so even output coordinates land
exactly on source samples.
"""

import numpy as np

from .validation import PAD_MODES, check_boundary, check_image


def fold_index(p, n, policy):
    """Map an arbitrary integer offset onto a valid index in [0, n).

    reflect mirrors around the edges without repeating the edge sample
    (period 2n-2); clamp snaps to the nearest edge. Total for every integer.
    """
    check_boundary(policy)
    if n == 1:
        return 0
    if policy == "clamp":
        return min(max(p, 0), n - 1)
    period = 2 * n - 2
    q = p % period
    return period - q if q >= n else q


def sample_with_boundary(img, row, col, policy="reflect"):
    """Read a pixel at any integer coordinate, remapping out-of-range
    coordinates by the boundary policy."""
    img = np.asarray(img)
    h, w = img.shape
    return img[fold_index(row, h, policy), fold_index(col, w, policy)]


def pad_image(img, pad, policy="reflect"):
    """Extend an image by ``pad`` pixels on every side per the boundary policy.

    Pointwise equal to sample_with_boundary on the corresponding virtual
    coordinates (numpy re-reflects as often as needed for pad >= size).
    """
    check_boundary(policy)
    if pad == 0:
        return np.asarray(img, dtype=np.float64)
    return np.pad(np.asarray(img, dtype=np.float64), pad, mode=PAD_MODES[policy])


def downsample_2x(img, mode="mean"):
    """Halve both dimensions. ``mean`` averages each 2x2 block (models sensor
    integration); ``decimate`` keeps the top-left pixel of each block."""
    img = check_image(img)
    h, w = img.shape
    if h % 2 or w % 2:
        raise ValueError(f"downsample_2x requires even dimensions, got {h}x{w}")
    if mode == "mean":
        return img.reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))
    if mode == "decimate":
        return img[::2, ::2].copy()
    raise ValueError(f"unknown downsample mode {mode!r}")


def nearest_upscale_2x(img):
    """Each source pixel becomes a constant 2x2 block."""
    img = check_image(img)
    return np.repeat(np.repeat(img, 2, axis=0), 2, axis=1)


# Catmull-Rom (a = -0.5) weights at the half-integer site.
_CR_HALF = np.array([-1.0, 9.0, 9.0, -1.0]) / 16.0


def _upscale_axis0(img, policy):
    """Double rows: even output rows copy the source, odd rows interpolate at
    row + 0.5 with the 4-tap Catmull-Rom stencil."""
    p = np.pad(img, ((1, 2), (0, 0)), mode=PAD_MODES[policy])
    h = img.shape[0]
    odd = (
        _CR_HALF[0] * p[0:h]
        + _CR_HALF[1] * p[1 : h + 1]
        + _CR_HALF[2] * p[2 : h + 2]
        + _CR_HALF[3] * p[3 : h + 3]
    )
    out = np.empty((2 * h, img.shape[1]), dtype=np.float64)
    out[0::2] = img
    out[1::2] = odd
    return out


def bicubic_upscale_2x(img, policy="reflect"):
    """Separable Catmull-Rom 2x upscale over 4x4 neighborhoods.

    Interpolating kernel: source grid samples are reproduced exactly, and
    linear ramps interpolate to their exact midpoints.
    """
    img = check_image(img)
    check_boundary(policy)
    h, w = img.shape
    if h < 4 or w < 4:
        raise ValueError(f"bicubic_upscale_2x requires at least 4x4 input, got {h}x{w}")
    rows = _upscale_axis0(img, policy)
    return _upscale_axis0(rows.T, policy).T
