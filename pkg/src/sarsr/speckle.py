"""Multiplicative speckle simulation and the log/exp transforms that turn it
into additive noise.

The noise model is J = I * (1 + n) with n zero-mean of standard deviation
sigma; taking logarithms converts the multiplicative factor into an additive
term so a Gaussian-noise denoiser applies, and exponentiation recovers the
image afterwards.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_epsilon, check_image

DEFAULT_EPSILON = 1e-4

#: Samples with 1 + n at or below this floor are re-drawn so log(1 + n) stays
#: defined. Fixed (not tied to the caller's log offset) so the noise stream
#: does not depend on the log-transform configuration.
REDRAW_FLOOR = 1e-4


@dataclass(frozen=True)
class SpeckleParams:
    """Noise factor configuration: std deviation, RNG seed, distribution family."""

    sigma: float = 0.2
    seed: int = 0
    distribution: str = "uniform"

    def __post_init__(self):
        if not (0.0 <= self.sigma < 1.0):
            raise ValueError(f"sigma must be in [0, 1), got {self.sigma}")
        if self.distribution not in ("uniform", "gaussian"):
            raise ValueError(
                f"distribution must be 'uniform' or 'gaussian', got {self.distribution!r}"
            )


def _draw_noise(rng, shape, params):
    if params.distribution == "uniform":
        half = params.sigma * np.sqrt(3.0)  # zero mean, std sigma
        return rng.uniform(-half, half, size=shape)
    return rng.normal(0.0, params.sigma, size=shape)


def add_speckle(img, params):
    """J = I * (1 + n), seeded and reproducible; output is not clamped."""
    img = check_image(img)
    rng = np.random.default_rng(params.seed)
    n = _draw_noise(rng, img.shape, params)
    bad = 1.0 + n <= REDRAW_FLOOR
    while bad.any():
        n[bad] = _draw_noise(rng, int(bad.sum()), params)
        bad = 1.0 + n <= REDRAW_FLOOR
    return img * (1.0 + n)


def to_log_domain(img, epsilon=DEFAULT_EPSILON):
    """ln(pixel + epsilon); epsilon guards zero pixels. Output may be negative."""
    img = check_image(img)
    epsilon = check_epsilon(epsilon)
    if img.min() < 0.0:
        raise ValueError("to_log_domain requires non-negative intensities")
    return np.log(img + epsilon)


def from_log_domain(img, epsilon=DEFAULT_EPSILON):
    """exp(pixel) - epsilon, the inverse of to_log_domain."""
    img = check_image(img)
    epsilon = check_epsilon(epsilon)
    return np.exp(img) - epsilon
