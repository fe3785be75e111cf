import numpy as np
import pytest

from sarsr.nlmeans import (
    KernelParams,
    WindowConfig,
    denoise,
    denoise_weight_sums,
    despeckle,
    kernel_weight,
    patch_distance,
)

from reference_impl import nlm_reference


class TestPatchDistance:
    def test_self_distance_zero(self):
        img = np.random.default_rng(0).random((7, 7))
        cfg = WindowConfig(2, 3)
        assert patch_distance(img, (3, 3), img, (3, 3), cfg) == 0.0

    def test_single_pixel(self):
        a = np.array([[0.3]])
        b = np.array([[0.7]])
        cfg = WindowConfig(0, 1)
        assert patch_distance(a, (0, 0), b, (0, 0), cfg) == pytest.approx(0.16)

    def test_matches_explicit_nine_offset_loop(self):
        rng = np.random.default_rng(5)
        img = rng.random((7, 7))
        cfg = WindowConfig(1, 2)
        got = patch_distance(img, (2, 3), img, (4, 1), cfg)
        total = 0.0
        for py in (-1, 0, 1):
            for px in (-1, 0, 1):
                total += (img[2 + py, 3 + px] - img[4 + py, 1 + px]) ** 2
        assert got == pytest.approx(total / 9.0, abs=1e-15)

    def test_symmetry_exact(self):
        rng = np.random.default_rng(6)
        a = rng.random((6, 6))
        b = rng.random((6, 6))
        cfg = WindowConfig(2, 1)
        assert patch_distance(a, (1, 2), b, (4, 3), cfg) == patch_distance(
            b, (4, 3), a, (1, 2), cfg
        )

    def test_center_must_be_inside(self):
        img = np.zeros((4, 4))
        with pytest.raises(ValueError, match="outside"):
            patch_distance(img, (4, 0), img, (0, 0), WindowConfig(1, 1))


class TestKernelWeight:
    def test_exp_at_zero(self):
        assert kernel_weight(0.0, KernelParams("exp", h=0.5)) == 1.0

    def test_cosine_endpoints(self):
        p = KernelParams("cosine", h=0.3)
        assert kernel_weight(0.0, p) == 1.0
        assert kernel_weight(0.3, p) == pytest.approx(0.0, abs=1e-15)
        assert kernel_weight(0.300001, p) == 0.0

    def test_combined_endpoints(self):
        p = KernelParams("combined", h1=0.2, h2=8.0)
        assert kernel_weight(0.0, p) == pytest.approx(np.exp(8.0))
        assert kernel_weight(0.2, p) == pytest.approx(1.0)
        assert kernel_weight(0.2000001, p) == 0.0

    def test_monotone_nonincreasing_on_support(self):
        grids = {
            "exp": np.linspace(0, 5, 200),
            "cosine": np.linspace(0, 0.4, 200),
            "combined": np.linspace(0, 0.4, 200),
        }
        for kind, grid in grids.items():
            p = KernelParams(kind, h=0.4, h1=0.4, h2=3.0)
            w = kernel_weight(grid, p)
            assert np.all(np.diff(w) <= 1e-15), kind

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            kernel_weight(-0.1, KernelParams("exp"))

    def test_param_validation(self):
        with pytest.raises(ValueError):
            KernelParams("gauss")
        with pytest.raises(ValueError):
            KernelParams("exp", h=0.0)


class TestDenoise:
    def test_constant_image_unchanged(self):
        img = np.full((10, 10), 0.42)
        out = denoise(img, WindowConfig(1, 3), KernelParams("exp", h=0.2))
        np.testing.assert_allclose(out, 0.42, atol=1e-12)

    def test_search_radius_zero_is_identity(self):
        img = np.random.default_rng(1).random((9, 9))
        for kind in ("exp", "cosine", "combined"):
            out = denoise(img, WindowConfig(2, 0), KernelParams(kind, h=0.5, h1=0.5, h2=2.0))
            np.testing.assert_allclose(out, img, atol=1e-12)

    def test_matches_naive_reference(self):
        rng = np.random.default_rng(11)
        img = rng.random((12, 12))
        cfg = WindowConfig(1, 3)
        params = KernelParams("exp", h=0.3)
        expected, _ = nlm_reference(img, 1, 3, "exp", 0.3, 0.3, 1.0)
        np.testing.assert_allclose(denoise(img, cfg, params), expected, atol=1e-9)

    def test_matches_naive_reference_cap_and_clamp(self):
        rng = np.random.default_rng(12)
        img = rng.random((10, 11))
        cfg = WindowConfig(2, 2, "clamp")
        params = KernelParams("combined", h1=0.4, h2=3.0)
        expected, _ = nlm_reference(
            img, 2, 2, "combined", 0.4, 0.4, 3.0, policy="clamp", cap_self=True
        )
        got = denoise(img, cfg, params, cap_self_weight=True)
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_output_within_window_range(self):
        rng = np.random.default_rng(13)
        img = rng.random((14, 14))
        out = denoise(img, WindowConfig(1, 4), KernelParams("exp", h=0.15))
        assert out.min() >= img.min() - 1e-12 and out.max() <= img.max() + 1e-12

    def test_weight_sums_one(self):
        rng = np.random.default_rng(14)
        img = rng.random((9, 9))
        for kind in ("exp", "cosine", "combined"):
            nsum, z = denoise_weight_sums(
                img, WindowConfig(1, 2), KernelParams(kind, h=0.6, h1=0.6, h2=2.0)
            )
            assert (z > 0).all()
            np.testing.assert_allclose(nsum, 1.0, atol=1e-9)

    def test_degenerate_fallback_keeps_center(self):
        # cap the self weight and make every other candidate exceed the cutoff
        img = np.indices((8, 8)).sum(axis=0) % 2 * 1.0  # checkerboard
        cfg = WindowConfig(0, 1)
        params = KernelParams("cosine", h=1e-6)
        nsum, z = denoise_weight_sums(img, cfg, params, cap_self_weight=True)
        out = denoise(img, cfg, params, cap_self_weight=True)
        assert (z == 0.0).any()
        np.testing.assert_array_equal(out[z == 0.0], img[z == 0.0])
        np.testing.assert_allclose(nsum[z > 0.0], 1.0, atol=1e-9)

    def test_too_small_image(self):
        with pytest.raises(ValueError, match="too small"):
            denoise(np.zeros((4, 4)), WindowConfig(3, 1), KernelParams("exp"))


class TestDespeckle:
    def test_constant_round_trip(self):
        img = np.full((10, 10), 0.6)
        out = despeckle(img, WindowConfig(1, 2), KernelParams("exp", h=0.3))
        np.testing.assert_allclose(out, 0.6, atol=1e-12)

    def test_search_radius_zero_identity(self):
        img = np.random.default_rng(4).random((8, 8))
        out = despeckle(img, WindowConfig(1, 0), KernelParams("exp", h=0.3))
        np.testing.assert_allclose(out, img, atol=1e-12)

    def test_improves_psnr_on_speckled_image(self, camera64):
        from sarsr.metrics import psnr
        from sarsr.speckle import SpeckleParams, add_speckle

        noisy = add_speckle(camera64, SpeckleParams(0.2, 42))
        out = despeckle(noisy, WindowConfig(2, 6), KernelParams("combined", h1=0.35, h2=6.0))
        gain = psnr(out, camera64) - psnr(np.clip(noisy, 0, 1), camera64)
        assert gain >= 3.0
