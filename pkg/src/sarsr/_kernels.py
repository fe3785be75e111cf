"""Jitted hot loops for the windowed NL-means operations.

Both kernels are data-parallel over output rows (prange); every output pixel
depends only on the immutable padded input and the inner summation order is
fixed, so results are bit-identical for any thread count. fastmath stays off
to keep that guarantee.

Inputs arrive pre-padded (np.pad per the boundary policy), which makes all
window reads plain in-bounds indexing: a candidate at virtual coordinate y
reads the boundary-extended image at y and around y.
"""

import numba
import numpy as np
from numba import njit, prange

KIND_CODES = {"exp": 0, "cosine": 1, "combined": 2}


def configure_threads(n):
    """Set the kernel thread count. 0 means 'all available'. Values above the
    hard numba maximum are clamped (the maximum is fixed at import time)."""
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(limit if n <= 0 else min(n, limit))


@njit(inline="always")
def _weight(d, kind, h, h1, h2):
    if kind == 0:
        return np.exp(-d / (h * h))
    if kind == 1:
        return np.cos(np.pi * d / (2.0 * h)) if d <= h else 0.0
    return np.exp(np.cos(np.pi * d / (2.0 * h1)) * h2) if d <= h1 else 0.0


@njit(inline="always")
def _patch_dist(p, ai, aj, q, bi, bj, r):
    s = 0.0
    for py in range(-r, r + 1):
        for px in range(-r, r + 1):
            diff = p[ai + py, aj + px] - q[bi + py, bj + px]
            s += diff * diff
    return s / ((2 * r + 1) * (2 * r + 1))


@njit(cache=True, parallel=True)
def nlm_filter(padded, height, width, pad, r, big_r, kind, h, h1, h2, cap_self):
    out = np.empty((height, width))
    for i in prange(height):
        for j in range(width):
            ci = i + pad
            cj = j + pad
            acc = 0.0
            z = 0.0
            wmax = 0.0
            for dy in range(-big_r, big_r + 1):
                for dx in range(-big_r, big_r + 1):
                    if cap_self and dy == 0 and dx == 0:
                        continue
                    yi = ci + dy
                    yj = cj + dx
                    d = _patch_dist(padded, ci, cj, padded, yi, yj, r)
                    w = _weight(d, kind, h, h1, h2)
                    if w > wmax:
                        wmax = w
                    z += w
                    acc += w * padded[yi, yj]
            if cap_self:
                z += wmax
                acc += wmax * padded[ci, cj]
            # all-zero weights (cutoff kernels): keep the center pixel
            out[i, j] = acc / z if z > 0.0 else padded[ci, cj]
    return out


@njit(cache=True, parallel=True)
def nlm_weight_sums(padded, height, width, pad, r, big_r, kind, h, h1, h2, cap_self):
    """Two-pass variant exposing the per-pixel normalized weight sum and the
    raw normalizer Z(x); Z(x) == 0 marks the fallback path."""
    nsum = np.zeros((height, width))
    zmap = np.empty((height, width))
    for i in prange(height):
        for j in range(width):
            ci = i + pad
            cj = j + pad
            z = 0.0
            wmax = 0.0
            for dy in range(-big_r, big_r + 1):
                for dx in range(-big_r, big_r + 1):
                    if cap_self and dy == 0 and dx == 0:
                        continue
                    d = _patch_dist(padded, ci, cj, padded, ci + dy, cj + dx, r)
                    w = _weight(d, kind, h, h1, h2)
                    if w > wmax:
                        wmax = w
                    z += w
            if cap_self:
                z += wmax
            zmap[i, j] = z
            if z > 0.0:
                s = 0.0
                for dy in range(-big_r, big_r + 1):
                    for dx in range(-big_r, big_r + 1):
                        if cap_self and dy == 0 and dx == 0:
                            continue
                        d = _patch_dist(padded, ci, cj, padded, ci + dy, cj + dx, r)
                        s += _weight(d, kind, h, h1, h2) / z
                if cap_self:
                    s += wmax / z
                nsum[i, j] = s
    return nsum, zmap


@njit(cache=True, parallel=True)
def sr_filter(pimg, plow, height, width, pad_img, pad_low, r, big_r, kind, h, h1, h2, cross_scale):
    """Cross-scale 2x upscaler core.

    For each parent pixel x of the input, candidates y live in the search
    window of the half-scale image around floor(x/2); each candidate
    contributes its child quad (the four input pixels at 2y) to the output
    child quad of x. Distances compare same-scale patches in the input (patch
    at x vs patch at 2y) unless cross_scale is set, in which case the
    candidate patch is read from the half-scale image at y.
    """
    out = np.empty((2 * height, 2 * width))
    for i in prange(height):
        for j in range(width):
            ci = i + pad_img
            cj = j + pad_img
            li = i // 2
            lj = j // 2
            a0 = 0.0
            a1 = 0.0
            a2 = 0.0
            a3 = 0.0
            z = 0.0
            for dy in range(-big_r, big_r + 1):
                for dx in range(-big_r, big_r + 1):
                    yl_r = li + dy
                    yl_c = lj + dx
                    if cross_scale:
                        d = _patch_dist(
                            pimg, ci, cj, plow, yl_r + pad_low, yl_c + pad_low, r
                        )
                    else:
                        d = _patch_dist(
                            pimg, ci, cj, pimg, 2 * yl_r + pad_img, 2 * yl_c + pad_img, r
                        )
                    w = _weight(d, kind, h, h1, h2)
                    z += w
                    br = 2 * yl_r + pad_img
                    bc = 2 * yl_c + pad_img
                    a0 += w * pimg[br, bc]
                    a1 += w * pimg[br, bc + 1]
                    a2 += w * pimg[br + 1, bc]
                    a3 += w * pimg[br + 1, bc + 1]
            oi = 2 * i
            oj = 2 * j
            if z > 0.0:
                out[oi, oj] = a0 / z
                out[oi, oj + 1] = a1 / z
                out[oi + 1, oj] = a2 / z
                out[oi + 1, oj + 1] = a3 / z
            else:
                # all candidates beyond cutoff: copy the search-center quad
                br = 2 * li + pad_img
                bc = 2 * lj + pad_img
                out[oi, oj] = pimg[br, bc]
                out[oi, oj + 1] = pimg[br, bc + 1]
                out[oi + 1, oj] = pimg[br + 1, bc]
                out[oi + 1, oj + 1] = pimg[br + 1, bc + 1]
    return out


@njit(cache=True, parallel=True)
def sr_weight_sums(pimg, plow, height, width, pad_img, pad_low, r, big_r, kind, h, h1, h2, cross_scale):
    """Per-parent normalized weight sums and normalizers for sr_filter."""
    nsum = np.zeros((height, width))
    zmap = np.empty((height, width))
    for i in prange(height):
        for j in range(width):
            ci = i + pad_img
            cj = j + pad_img
            li = i // 2
            lj = j // 2
            z = 0.0
            for dy in range(-big_r, big_r + 1):
                for dx in range(-big_r, big_r + 1):
                    if cross_scale:
                        d = _patch_dist(
                            pimg, ci, cj, plow, li + dy + pad_low, lj + dx + pad_low, r
                        )
                    else:
                        d = _patch_dist(
                            pimg, ci, cj, pimg, 2 * (li + dy) + pad_img, 2 * (lj + dx) + pad_img, r
                        )
                    z += _weight(d, kind, h, h1, h2)
            zmap[i, j] = z
            if z > 0.0:
                s = 0.0
                for dy in range(-big_r, big_r + 1):
                    for dx in range(-big_r, big_r + 1):
                        if cross_scale:
                            d = _patch_dist(
                                pimg, ci, cj, plow, li + dy + pad_low, lj + dx + pad_low, r
                            )
                        else:
                            d = _patch_dist(
                                pimg, ci, cj, pimg, 2 * (li + dy) + pad_img, 2 * (lj + dx) + pad_img, r
                            )
                        s += _weight(d, kind, h, h1, h2) / z
                nsum[i, j] = s
    return nsum, zmap
