"""PSNR and ENL image quality metrics.

PSNR uses peak 1.0 (the [0,1] intensity convention; identical to 8-bit/255
scaling). ENL (equivalent number of looks) is mean^2/variance over a region
assumed homogeneous -- higher means smoother speckle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_image, check_same_shape


@dataclass(frozen=True)
class Region:
    """Rectangular window: top-left corner plus size. Area must be >= 2."""

    top: int
    left: int
    height: int
    width: int

    def __post_init__(self):
        if self.top < 0 or self.left < 0 or self.height < 1 or self.width < 1:
            raise ValueError(f"invalid region {self}")
        if self.height * self.width < 2:
            raise ValueError(f"region area must be >= 2, got {self}")

    def slice_from(self, img):
        if self.top + self.height > img.shape[0] or self.left + self.width > img.shape[1]:
            raise ValueError(f"region {self} does not fit image of shape {img.shape}")
        return img[self.top : self.top + self.height, self.left : self.left + self.width]

    @classmethod
    def full(cls, img):
        return cls(0, 0, img.shape[0], img.shape[1])


def psnr(test, reference):
    """10 log10(1/MSE) in dB; math.inf when the images are identical."""
    test = check_image(test, "test")
    reference = check_image(reference, "reference")
    check_same_shape(test, reference)
    mse = float(np.mean((test - reference) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def enl(img, region=None, sample_variance=False):
    """mean^2 / variance over the region (population variance by default).

    A constant region is degenerate: returns math.inf (or nan if the mean is
    zero as well). region=None uses the whole image.
    """
    img = check_image(img)
    values = Region.full(img).slice_from(img) if region is None else region.slice_from(img)
    if values.size < 2:
        raise ValueError("ENL needs a region of at least 2 pixels")
    mean = float(values.mean())
    var = float(values.var(ddof=1 if sample_variance else 0))
    if var == 0.0:
        return math.nan if mean == 0.0 else math.inf
    return mean * mean / var


def find_homogeneous_region(img, size=32):
    """The size x size window with minimal variance (ties: topmost, then
    leftmost), located with summed-area tables. Meant to run on the clean
    reference so the ENL region is reproducible."""
    img = check_image(img)
    h, w = img.shape
    if size < 2:
        raise ValueError("region size must be >= 2")
    if size > h or size > w:
        raise ValueError(f"no {size}x{size} window fits a {h}x{w} image")
    s1 = np.zeros((h + 1, w + 1))
    s2 = np.zeros((h + 1, w + 1))
    np.cumsum(np.cumsum(img, axis=0), axis=1, out=s1[1:, 1:])
    np.cumsum(np.cumsum(img * img, axis=0), axis=1, out=s2[1:, 1:])

    def window_sums(s):
        return (
            s[size:, size:] - s[:-size, size:] - s[size:, :-size] + s[:-size, :-size]
        )

    area = size * size
    mean = window_sums(s1) / area
    var = window_sums(s2) / area - mean * mean
    top, left = np.unravel_index(int(np.argmin(var)), var.shape)
    return Region(int(top), int(left), size, size)


@dataclass
class MetricsReport:
    """Per-method PSNR/ENL rows plus the clean reference ENL and the region used."""

    rows: list  # (method, psnr_db or None, enl value)
    clean_enl: float
    region: Region

    def add(self, method, psnr_db, enl_value):
        self.rows.append((method, psnr_db, enl_value))

    def get(self, method):
        for name, p, e in self.rows:
            if name == method:
                return p, e
        raise KeyError(method)

    def to_csv(self):
        lines = ["method,psnr_db,enl"]
        for name, p, e in self.rows:
            lines.append(f"{name},{_fmt(p)},{_fmt(e)}")
        return "\n".join(lines) + "\n"

    def to_text(self):
        region = self.region
        lines = [
            f"ENL region: top={region.top} left={region.left} "
            f"{region.height}x{region.width}; clean ENL = {_fmt(self.clean_enl)}",
            f"{'method':<14}{'PSNR (dB)':>12}{'ENL':>12}",
        ]
        for name, p, e in self.rows:
            lines.append(f"{name:<14}{_fmt(p):>12}{_fmt(e):>12}")
        return "\n".join(lines) + "\n"


def _fmt(value):
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.4f}"
