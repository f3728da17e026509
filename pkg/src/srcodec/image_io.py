"""Binary P6 PPM reading/writing and block-aligned padding.

Images are numpy arrays of shape (height, width, 3), dtype uint8.
"""

from dataclasses import dataclass

import numpy as np

from .errors import PpmParseError

_WHITESPACE = b" \t\n\r\x0b\x0c"


@dataclass(frozen=True)
class PaddedImage:
    """An image extended on the bottom/right to a multiple of a block side."""

    pixels: np.ndarray  # (padded_h, padded_w, 3) uint8
    orig_height: int
    orig_width: int

    def crop(self) -> np.ndarray:
        return self.pixels[: self.orig_height, : self.orig_width].copy()


def _validate_image(img):
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) array, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if img.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {img.dtype}")
    return img


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments, then collect one ASCII token.
    n = len(data)
    while pos < n:
        b = data[pos : pos + 1]
        if b in (b"#",):
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
        elif b in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise PpmParseError(f"unexpected end of header at byte {pos}")
    start = pos
    while pos < n and data[pos : pos + 1] not in _WHITESPACE:
        pos += 1
    return data[start:pos], pos


def read_ppm(data: bytes) -> np.ndarray:
    """Parse a binary (P6) PPM with maxval 255 into a (h, w, 3) uint8 array."""
    if data[:2] != b"P6":
        raise PpmParseError("not a binary P6 PPM (magic mismatch at byte 0)")
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_token(data, pos)
        try:
            value = int(token)
        except ValueError:
            raise PpmParseError(
                f"non-numeric {name} {token!r} at byte {pos - len(token)}"
            ) from None
        fields.append(value)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PpmParseError(f"invalid dimensions {width}x{height} in header")
    if maxval != 255:
        raise PpmParseError(f"unsupported maxval {maxval} at byte {pos - len(str(maxval))}")
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise PpmParseError(f"missing whitespace after maxval at byte {pos}")
    pos += 1  # exactly one whitespace byte separates header from payload
    need = width * height * 3
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise PpmParseError(
            f"truncated payload: need {need} bytes at byte {pos}, have {len(payload)}"
        )
    img = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return img.copy()


def write_ppm(img: np.ndarray) -> bytes:
    """Serialise to canonical binary P6: single-space-separated header, maxval 255."""
    img = _validate_image(img)
    height, width = img.shape[:2]
    header = f"P6 {width} {height} 255 ".encode("ascii")
    return header + img.tobytes()


def pad_to_block(img: np.ndarray, block_side: int) -> PaddedImage:
    """Mirror-extend (edge-inclusive) bottom/right to the next multiple of block_side."""
    img = _validate_image(img)
    if block_side < 1:
        raise ValueError("block_side must be >= 1")
    h, w = img.shape[:2]
    pad_h = (-h) % block_side
    pad_w = (-w) % block_side
    if pad_h or pad_w:
        padded = np.pad(img, ((0, pad_h), (0, pad_w), (0, 0)), mode="symmetric")
    else:
        padded = img.copy()
    return PaddedImage(pixels=padded, orig_height=h, orig_width=w)
