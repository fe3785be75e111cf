import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sarsr.image_io import ImageFormatError, load_image, save_image


def write_p5(path, arr):
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(arr.astype(np.uint8).tobytes())


def test_p2_values(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n2 2\n255\n0 255\n127 255\n")
    img = load_image(p)
    assert img.shape == (2, 2)
    np.testing.assert_array_equal(img, [[0.0, 1.0], [127 / 255, 1.0]])


def test_p2_with_comments(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n# size next\n2 1 # inline\n255\n7 8\n")
    np.testing.assert_array_equal(load_image(p), [[7 / 255, 8 / 255]])


def test_p5_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(42)
    for _ in range(10):
        arr = rng.integers(0, 256, size=(5, 7), dtype=np.uint8)
        src = tmp_path / "src.pgm"
        dst = tmp_path / "dst.pgm"
        write_p5(src, arr)
        save_image(load_image(src), dst)
        np.testing.assert_array_equal(load_image(dst) * 255, arr)
        # byte-level: raster payloads identical
        assert dst.read_bytes().split(b"255\n", 1)[1] == arr.tobytes()


def test_p5_short_payload(tmp_path):
    p = tmp_path / "a.pgm"
    with open(p, "wb") as fh:
        fh.write(b"P5\n2 2\n255\n")
        fh.write(bytes([1, 2, 3]))  # one byte short
    with pytest.raises(ImageFormatError, match="size mismatch"):
        load_image(p)


def test_p5_trailing_garbage(tmp_path):
    p = tmp_path / "a.pgm"
    with open(p, "wb") as fh:
        fh.write(b"P5\n2 1\n255\n\x01\x02EXTRA")
    with pytest.raises(ImageFormatError, match="size mismatch"):
        load_image(p)


def test_p5_trailing_newline_ok(tmp_path):
    p = tmp_path / "a.pgm"
    with open(p, "wb") as fh:
        fh.write(b"P5\n2 1\n255\n\x01\x02\n")
    np.testing.assert_array_equal(load_image(p) * 255, [[1, 2]])


def test_unsupported_maxval(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n1 1\n65535\n1024\n")
    with pytest.raises(ImageFormatError, match="maxval"):
        load_image(p)


def test_p2_out_of_range_sample(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_text("P2\n1 1\n255\n300\n")
    with pytest.raises(ImageFormatError, match="range"):
        load_image(p)


def test_not_an_image(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"GIF89a whatever")
    with pytest.raises(ImageFormatError):
        load_image(p)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_image(tmp_path / "nope.pgm")


def test_save_clamps_and_rounds(tmp_path):
    p = tmp_path / "a.pgm"
    save_image(np.array([[1.5, 0.5], [-0.2, 0.0]]), p)
    raster = p.read_bytes().split(b"255\n", 1)[1]
    assert list(raster) == [255, 128, 0, 0]


def test_save_round_half_up(tmp_path):
    # 126.5/255 would round to 126 under round-half-even; the contract is half-up
    p = tmp_path / "a.pgm"
    save_image(np.array([[126.5 / 255, 127.5 / 255]]), p)
    raster = p.read_bytes().split(b"255\n", 1)[1]
    assert list(raster) == [127, 128]


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
)
def test_load_save_identity_on_quantized(tmp_path_factory, h, w, seed):
    tmp = tmp_path_factory.mktemp("io")
    arr = np.random.default_rng(seed).integers(0, 256, size=(h, w), dtype=np.uint8)
    p = tmp / "x.pgm"
    save_image(arr / 255.0, p)
    np.testing.assert_array_equal(load_image(p), arr / 255.0)


def test_png_grayscale(tmp_path):
    PIL = pytest.importorskip("PIL.Image")
    arr = np.arange(12, dtype=np.uint8).reshape(3, 4) * 20
    p = tmp_path / "g.png"
    PIL.fromarray(arr, mode="L").save(p)
    np.testing.assert_allclose(load_image(p), arr / 255.0)


def test_png_rgb_rejected(tmp_path):
    PIL = pytest.importorskip("PIL.Image")
    arr = np.zeros((3, 4, 3), dtype=np.uint8)
    p = tmp_path / "c.png"
    PIL.fromarray(arr, mode="RGB").save(p)
    with pytest.raises(ImageFormatError, match="grayscale"):
        load_image(p)
