import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarsr.resample import (
    bicubic_upscale_2x,
    downsample_2x,
    fold_index,
    nearest_upscale_2x,
    pad_image,
    sample_with_boundary,
)

from reference_impl import fold


class TestDownsample:
    def test_block_mean(self):
        img = np.array([[0.1, 0.2], [0.3, 0.4]])
        np.testing.assert_allclose(downsample_2x(img), [[0.25]])

    def test_constant(self):
        np.testing.assert_array_equal(downsample_2x(np.full((4, 6), 0.7)), np.full((2, 3), 0.7))

    def test_ramp_matches_per_block_means(self):
        img = np.arange(16, dtype=np.float64).reshape(4, 4)
        expected = np.empty((2, 2))
        for i in range(2):
            for j in range(2):
                expected[i, j] = img[2 * i : 2 * i + 2, 2 * j : 2 * j + 2].sum() / 4.0
        np.testing.assert_allclose(downsample_2x(img), expected)

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError, match="even"):
            downsample_2x(np.zeros((3, 4)))

    def test_global_mean_preserved(self):
        rng = np.random.default_rng(3)
        img = rng.random((8, 10))
        assert abs(downsample_2x(img).mean() - img.mean()) < 1e-14

    def test_decimate(self):
        img = np.arange(16, dtype=np.float64).reshape(4, 4)
        np.testing.assert_array_equal(downsample_2x(img, "decimate"), img[::2, ::2])


class TestBoundary:
    def test_reflect_examples(self):
        img = np.arange(20, dtype=np.float64).reshape(4, 5)
        assert sample_with_boundary(img, -1, 0) == img[1, 0]
        assert sample_with_boundary(img, -3, 5, "clamp") == img[0, 4]

    def test_exhaustive_offsets_total(self):
        img = np.random.default_rng(0).random((5, 5))
        for policy in ("reflect", "clamp"):
            for i in range(-10, 10):
                for j in range(-10, 10):
                    v = sample_with_boundary(img, i, j, policy)
                    assert v in img  # always lands on a real pixel

    def test_fold_matches_independent_fold(self):
        for policy in ("reflect", "clamp"):
            for n in (1, 2, 3, 7):
                for p in range(-4 * n, 4 * n):
                    assert fold_index(p, n, policy) == fold(p, n, policy)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 15), st.integers(0, 10**6))
    def test_pad_image_matches_sampling(self, h, w, pad, seed):
        img = np.random.default_rng(seed).random((h, w))
        for policy in ("reflect", "clamp"):
            padded = pad_image(img, pad, policy)
            for i in (-pad, -1, 0, h // 2, h - 1, h + pad - 1):
                for j in (-pad, -1, 0, w // 2, w + pad - 1):
                    assert padded[i + pad, j + pad] == sample_with_boundary(img, i, j, policy)

    def test_unknown_policy(self):
        with pytest.raises(ValueError, match="boundary"):
            sample_with_boundary(np.zeros((2, 2)), 0, 0, "wrap")


class TestBicubic:
    def test_constant(self):
        out = bicubic_upscale_2x(np.full((4, 4), 0.3))
        assert out.shape == (8, 8)
        np.testing.assert_allclose(out, 0.3)

    def test_source_grid_reproduced(self):
        img = np.random.default_rng(1).random((5, 6))
        out = bicubic_upscale_2x(img)
        np.testing.assert_array_equal(out[::2, ::2], img)

    def test_linear_ramp_midpoints(self):
        # cubic interpolation reproduces linear functions exactly where the
        # 4-tap stencil sees genuine ramp data (away from the borders)
        img = np.tile(np.arange(8, dtype=np.float64), (4, 1))
        out = bicubic_upscale_2x(img)
        np.testing.assert_allclose(out[0, 3:12:2], np.arange(1, 6) + 0.5)

    def test_too_small(self):
        with pytest.raises(ValueError, match="too small|at least"):
            bicubic_upscale_2x(np.zeros((3, 4)))

    def test_overshoot_bounds(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            img = rng.random((6, 6))
            out = bicubic_upscale_2x(img)
            assert np.all(np.isfinite(out))
            # true worst case for Catmull-Rom at half-integer sites is +-9/32
            assert out.min() >= -9 / 32 - 1e-12 and out.max() <= 1 + 9 / 32 + 1e-12
            # random [0,1] images stay well within the documented [-0.25, 1.25]
            assert out.min() >= -0.25 and out.max() <= 1.25

    def test_natural_image_bounds(self, camera64):
        out = bicubic_upscale_2x(camera64)
        assert out.min() >= -0.25 and out.max() <= 1.25


def test_nearest_upscale():
    img = np.array([[1.0, 2.0]])
    np.testing.assert_array_equal(
        nearest_upscale_2x(img), [[1.0, 1.0, 2.0, 2.0], [1.0, 1.0, 2.0, 2.0]]
    )
