"""Image buffers, decoding/encoding and the resampling used by the protocol.

All measures consume an :class:`ImageBuffer`. Pixel data is kept as a
``(height, width, channels)`` numpy array in row-major order, either as
8-bit integers or as floats in the unit interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

DEPTHS = ("uint8", "float")
ENCODINGS = ("srgb", "linear", "gray")

# Luma weights shared by grayscale conversion and the UISM channel combination.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class ImageReadError(OSError):
    """Raised when an image file cannot be read or decoded."""

    def __init__(self, path, reason):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


@dataclass(frozen=True)
class ImageBuffer:
    """Pixel container with an explicit depth and colour encoding.

    Attributes:
        data: array of shape (height, width, channels); uint8 for 8-bit
            buffers, float64 in [0, 1] for float buffers.
        depth: ``"uint8"`` or ``"float"``.
        encoding: ``"srgb"``, ``"linear"`` or ``"gray"``.
    """

    data: np.ndarray
    depth: str = "uint8"
    encoding: str = "srgb"

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ValueError(f"expected (H, W, 1|3) pixel array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        if self.depth not in DEPTHS:
            raise ValueError(f"unknown depth {self.depth!r}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.depth == "uint8":
            if data.dtype != np.uint8:
                if np.any(data < 0) or np.any(data > 255) or np.any(data != np.round(data)):
                    raise ValueError("8-bit samples must be integers in [0, 255]")
                data = data.astype(np.uint8)
        else:
            data = data.astype(np.float64, copy=False)
            if not np.all(np.isfinite(data)) or data.min() < 0.0 or data.max() > 1.0:
                raise ValueError("float samples must lie in [0, 1]")
        if (data.shape[2] == 1) != (self.encoding == "gray"):
            raise ValueError(f"{data.shape[2]}-channel data cannot carry encoding {self.encoding!r}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape

    @property
    def max_value(self) -> float:
        return 255.0 if self.depth == "uint8" else 1.0

    def samples(self) -> np.ndarray:
        """Float64 copy of the pixels on the 8-bit scale [0, 255]."""
        if self.depth == "uint8":
            return self.data.astype(np.float64)
        return self.data * 255.0

    def unit(self) -> np.ndarray:
        """Float64 copy of the pixels on the unit scale [0, 1]."""
        if self.depth == "uint8":
            return self.data / 255.0
        return np.array(self.data, dtype=np.float64)

    @classmethod
    def from_array(cls, array, encoding=None) -> "ImageBuffer":
        """Wrap an array; integer dtypes become 8-bit, floats unit-interval."""
        array = np.asarray(array)
        depth = "uint8" if np.issubdtype(array.dtype, np.integer) else "float"
        if encoding is None:
            encoding = "gray" if array.ndim == 2 or array.shape[-1] == 1 else "srgb"
        return cls(array, depth=depth, encoding=encoding)


def round_half_away(x):
    """Round half away from zero (``np.round`` rounds half to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def to_uint8(img: ImageBuffer) -> ImageBuffer:
    if img.depth == "uint8":
        return img
    data = round_half_away(np.clip(img.data * 255.0, 0.0, 255.0)).astype(np.uint8)
    return ImageBuffer(data, "uint8", img.encoding)


def to_float(img: ImageBuffer) -> ImageBuffer:
    if img.depth == "float":
        return img
    return ImageBuffer(img.data / 255.0, "float", img.encoding)


def as_buffer(img) -> ImageBuffer:
    if isinstance(img, ImageBuffer):
        return img
    return ImageBuffer.from_array(img)


def load_image(path) -> ImageBuffer:
    """Decode a PNG or JPEG file into an 8-bit, 3-channel sRGB buffer.

    Grayscale and palette images are expanded to three channels; alpha is
    dropped.

    Raises:
        ImageReadError: the file is missing, not an image, or truncated.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.format not in ("PNG", "JPEG", "MPO"):
                raise ImageReadError(path, f"unsupported format {im.format}")
            im.load()
            if im.mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(im, dtype=np.float64)
                arr = round_half_away(arr * (255.0 / 65535.0)).astype(np.uint8)
                data = np.repeat(arr[:, :, None], 3, axis=2)
            else:
                data = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except ImageReadError:
        raise
    except FileNotFoundError as exc:
        raise ImageReadError(path, "no such file") from exc
    except UnidentifiedImageError as exc:
        raise ImageReadError(path, "unsupported or unrecognised image format") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise ImageReadError(path, f"corrupt image data ({exc})") from exc
    return ImageBuffer(data, "uint8", "srgb")


def save_png(img: ImageBuffer, path) -> None:
    """Write an 8-bit PNG (float buffers are rounded to 8 bits first)."""
    img = to_uint8(as_buffer(img))
    data = img.data[:, :, 0] if img.channels == 1 else img.data
    Image.fromarray(np.ascontiguousarray(data)).save(Path(path), format="PNG")


def _output_size(n, scale):
    return math.floor(Fraction(n) * scale + Fraction(1, 2))


def _axis_weights(n_in, n_out):
    # center-aligned sample positions, clamped at the edges
    pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    pos = np.clip(pos, 0.0, n_in - 1)
    i0 = np.floor(pos).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    return i0, i1, pos - i0


def resize_bilinear(img: ImageBuffer, scale) -> ImageBuffer:
    """Downsample with bilinear interpolation.

    Output sizes are ``round(size * scale)`` per axis. Sample positions are
    center-aligned and clamped at the borders, so ``scale=1`` is an exact copy
    and the output never leaves the input's value range.

    Args:
        img: source buffer.
        scale: factor in (0, 1]; floats are converted to exact fractions
            (``0.25`` and ``Fraction(1, 4)`` are equivalent).

    Raises:
        ValueError: scale outside (0, 1] or an output side of zero pixels.
    """
    img = as_buffer(img)
    scale = Fraction(scale).limit_denominator(1 << 20)
    if not 0 < scale <= 1:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    out_h, out_w = _output_size(img.height, scale), _output_size(img.width, scale)
    if out_h < 1 or out_w < 1:
        raise ValueError(f"scale {scale} gives a degenerate {out_w}x{out_h} output")
    if scale == 1:
        return ImageBuffer(img.data.copy(), img.depth, img.encoding)

    src = img.data.astype(np.float64)
    r0, r1, wr = _axis_weights(img.height, out_h)
    c0, c1, wc = _axis_weights(img.width, out_w)
    wr = wr[:, None, None]
    rows = src[r0] * (1.0 - wr) + src[r1] * wr
    wc = wc[None, :, None]
    out = rows[:, c0] * (1.0 - wc) + rows[:, c1] * wc
    if img.depth == "uint8":
        out = round_half_away(out).astype(np.uint8)
    else:
        out = np.clip(out, 0.0, 1.0)
    return ImageBuffer(out, img.depth, img.encoding)


def to_grayscale(img: ImageBuffer) -> ImageBuffer:
    """Luma ``0.299 R + 0.587 G + 0.114 B`` at the input depth.

    Single-channel input is returned unchanged.
    """
    img = as_buffer(img)
    if img.channels == 1:
        return img
    rgb = img.data.astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    y = wr * rgb[:, :, 0] + wg * rgb[:, :, 1] + wb * rgb[:, :, 2]
    if img.depth == "uint8":
        # y >= 0, where floor(y + 0.5) is round-half-away; weights sum to 1 so y <= 255
        y = np.minimum(np.floor(y + 0.5), 255.0).astype(np.uint8)
    else:
        y = np.clip(y, 0.0, 1.0)
    return ImageBuffer(y[:, :, None], img.depth, "gray")


def preprocess(img: ImageBuffer, quarter=False) -> ImageBuffer:
    """Protocol preprocessing: optional quarter-size bilinear resize, then 8-bit."""
    img = as_buffer(img)
    if quarter:
        img = resize_bilinear(img, Fraction(1, 4))
    return to_uint8(img)
