import numpy as np
import pytest


def _block_mean_halve(img):
    h, w = img.shape
    return img.reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))


@pytest.fixture(scope="session")
def camera512():
    skimage_data = pytest.importorskip("skimage.data")
    return skimage_data.camera().astype(np.float64) / 255.0


@pytest.fixture(scope="session")
def camera256(camera512):
    return _block_mean_halve(camera512)


@pytest.fixture(scope="session")
def camera128(camera256):
    return _block_mean_halve(camera256)


@pytest.fixture(scope="session")
def camera64(camera128):
    # a detailed crop (face/tripod area), not a further blur
    return camera128[40:104, 30:94].copy()
