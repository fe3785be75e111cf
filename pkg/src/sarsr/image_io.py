"""Grayscale image file I/O.

The contract format is 8-bit PGM: P2 (ASCII) and P5 (binary) are read, P5 is
written, maxval must be 255. 8-bit grayscale PNG is additionally readable when
Pillow is installed. In memory an image is a 2-D float64 array; file values
v in 0..255 map to v/255, and writing quantizes with round-half-up after
clamping to [0, 1].
"""

import numpy as np

from .validation import check_image


class ImageFormatError(ValueError):
    """Unsupported or malformed image file."""


_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def load_image(path):
    """Read an 8-bit grayscale PGM (P2/P5) or PNG file into a [0,1] float image."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P2", b"P5"):
        return _parse_pgm(data)
    if data[: len(_PNG_MAGIC)] == _PNG_MAGIC:
        return _load_png(path)
    raise ImageFormatError(f"{path}: not a PGM (P2/P5) or PNG file")


def save_image(img, path):
    """Write a float image as binary PGM (P5, maxval 255).

    Values are clamped to [0, 1] first; quantization is round-half-up, so an
    intensity of exactly 0.5 stores byte 128.
    """
    img = check_image(img)
    q = np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    h, w = q.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(q.tobytes())


def _tokenize_pnm_header(data, n_tokens):
    """Yield the first ``n_tokens`` whitespace-separated header tokens,
    skipping ``#`` comments, and return them with the offset one byte past the
    whitespace character that terminated the last token."""
    tokens = []
    i = 0
    while len(tokens) < n_tokens:
        if i >= len(data):
            raise ImageFormatError("truncated PNM header")
        c = data[i : i + 1]
        if c == b"#":
            i = data.find(b"\n", i)
            if i < 0:
                raise ImageFormatError("truncated PNM header")
            i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
            if len(tokens) == n_tokens:
                # exactly one whitespace byte separates header from payload
                if i < len(data) and data[i : i + 1].isspace():
                    i += 1
    return tokens, i


def _parse_pgm(data):
    magic = data[:2]
    tokens, offset = _tokenize_pnm_header(data, 4)
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise ImageFormatError(f"malformed PGM header: {exc}") from exc
    if width < 1 or height < 1:
        raise ImageFormatError(f"invalid PGM dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"unsupported PGM maxval {maxval} (only 8-bit, 255)")

    n = width * height
    if magic == b"P5":
        payload = data[offset : offset + n]
        if len(payload) < n:
            raise ImageFormatError(
                f"P5 payload size mismatch: expected {n} bytes, got {len(payload)}"
            )
        trailing = data[offset + n :]
        if trailing.strip():
            raise ImageFormatError("P5 payload size mismatch: trailing data after raster")
        values = np.frombuffer(payload, dtype=np.uint8)
    else:  # P2: ASCII raster, comments still allowed
        raster = _strip_pnm_comments(data[offset:])
        fields = raster.split()
        if len(fields) != n:
            raise ImageFormatError(
                f"P2 payload size mismatch: expected {n} samples, got {len(fields)}"
            )
        try:
            values = np.array([int(f) for f in fields], dtype=np.int64)
        except ValueError as exc:
            raise ImageFormatError(f"malformed P2 sample: {exc}") from exc
        if values.min() < 0 or values.max() > 255:
            raise ImageFormatError("P2 sample out of 0..255 range")
        values = values.astype(np.uint8)

    return values.reshape(height, width).astype(np.float64) / 255.0


def _strip_pnm_comments(data):
    out = []
    for line in data.split(b"\n"):
        hash_pos = line.find(b"#")
        out.append(line if hash_pos < 0 else line[:hash_pos])
    return b"\n".join(out)


def _load_png(path):
    try:
        from PIL import Image as PILImage
    except ImportError as exc:
        raise ImageFormatError(
            "PNG support requires Pillow (pip install sarsr[png]); "
            "PGM is the contract format"
        ) from exc
    with PILImage.open(path) as im:
        if im.mode != "L":
            raise ImageFormatError(
                f"{path}: unsupported PNG mode {im.mode!r}, only 8-bit grayscale (L)"
            )
        arr = np.asarray(im, dtype=np.uint8)
    return arr.astype(np.float64) / 255.0
