"""Input validation helpers shared by the functional core and the estimators."""

import numpy as np

BOUNDARY_POLICIES = ("reflect", "clamp")
KERNEL_KINDS = ("exp", "cosine", "combined")

#: np.pad mode implementing each boundary policy ("reflect" mirrors without
#: repeating the edge pixel, "edge" clamps to it).
PAD_MODES = {"reflect": "reflect", "clamp": "edge"}


def check_image(X, name="image"):
    """Coerce to a validated float64 grayscale image.

    Accepts anything array-like; returns a C-contiguous 2-D float64 array.
    Raises ValueError for wrong dimensionality, empty axes, or non-finite
    values.
    """
    arr = np.ascontiguousarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-D grayscale array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_same_shape(a, b, name_a="test", name_b="reference"):
    if a.shape != b.shape:
        raise ValueError(
            f"{name_a} and {name_b} dimensions differ: {a.shape} vs {b.shape}"
        )


def check_boundary(policy):
    if policy not in BOUNDARY_POLICIES:
        raise ValueError(
            f"unknown boundary policy {policy!r}, expected one of {BOUNDARY_POLICIES}"
        )
    return policy


def check_epsilon(epsilon):
    """Log-offset guard: must sit in (0, 1e-3] so it vanishes under 8-bit quantization."""
    if not (0.0 < epsilon <= 1e-3):
        raise ValueError(f"epsilon must be in (0, 1e-3], got {epsilon}")
    return float(epsilon)
