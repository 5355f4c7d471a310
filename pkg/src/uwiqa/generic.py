"""Generic quality measures: MSE/PSNR, SSIM, Qu, entropy and visible-edge count."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ._kernels import sobel_magnitude
from .color_accuracy import delta_e00
from .colorspace import srgb_to_lab
from .image import ImageBuffer, as_buffer, to_grayscale, to_uint8

PSNR_INFINITE = math.inf


@dataclass(frozen=True)
class SsimParams:
    window: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError("SSIM window must be odd and at least 3")
        if self.k1 <= 0 or self.k2 <= 0 or self.sigma <= 0 or self.dynamic_range <= 0:
            raise ValueError("SSIM k1, k2, sigma and dynamic_range must be positive")


@dataclass(frozen=True)
class EdgeCount:
    count: int
    ratio: float


def _check_same_shape(ref, test):
    if ref.shape != test.shape:
        raise ValueError(f"dimension mismatch: {ref.shape} vs {test.shape}")


def mse_psnr(ref: ImageBuffer, test: ImageBuffer):
    """Mean squared error and PSNR in dB over all samples.

    The peak is 255 for 8-bit buffers and 1 for float buffers. Identical
    images give ``psnr == math.inf``.

    Returns:
        ``(mse, psnr)``
    """
    ref, test = as_buffer(ref), as_buffer(test)
    _check_same_shape(ref, test)
    if ref.depth != test.depth:
        raise ValueError("images have different bit depths")
    diff = ref.data.astype(np.float64) - test.data.astype(np.float64)
    mse = float(np.mean(diff**2))
    if mse == 0.0:
        return mse, PSNR_INFINITE
    return mse, 10.0 * math.log10(ref.max_value**2 / mse)


def _gray_samples(img):
    img = as_buffer(img)
    return to_grayscale(to_uint8(img)).samples()[..., 0]


def gaussian_window(size, sigma):
    x = np.arange(size) - (size - 1) / 2.0
    w = np.exp(-(x**2) / (2.0 * sigma**2))
    return w / w.sum()


def ssim_map(x: np.ndarray, y: np.ndarray, params: SsimParams = SsimParams()) -> np.ndarray:
    """Local SSIM over every full window position ("valid" region)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if min(x.shape) < params.window:
        raise ValueError(f"image {x.shape} is smaller than the {params.window}x{params.window} window")
    w = gaussian_window(params.window, params.sigma)
    r = params.window // 2

    def blur(a):
        a = ndimage.correlate1d(a, w, axis=0, mode="constant")
        a = ndimage.correlate1d(a, w, axis=1, mode="constant")
        return a[r:-r, r:-r]

    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2
    mx, my = blur(x), blur(y)
    sxx = blur(x * x) - mx * mx
    syy = blur(y * y) - my * my
    sxy = blur(x * y) - mx * my
    num = (2.0 * mx * my + c1) * (2.0 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return num / den


def ssim(ref: ImageBuffer, test: ImageBuffer, params: SsimParams = SsimParams()) -> float:
    """Mean SSIM with a Gaussian-weighted window on luma (8-bit scale)."""
    ref, test = as_buffer(ref), as_buffer(test)
    _check_same_shape(ref, test)
    return float(np.mean(ssim_map(_gray_samples(ref), _gray_samples(test), params)))


def mean_delta_e00(ref: ImageBuffer, test: ImageBuffer) -> float:
    """Per-pixel CIEDE2000 between two images, averaged."""
    ref, test = as_buffer(ref), as_buffer(test)
    _check_same_shape(ref, test)
    if ref.channels != 3:
        raise ValueError("colour difference needs 3-channel images")
    return float(np.mean(delta_e00(srgb_to_lab(ref.data), srgb_to_lab(test.data))))


def qu(ref: ImageBuffer, test: ImageBuffer, params: SsimParams = SsimParams()) -> float:
    """Equal-weight combination ``0.5 SSIM + 0.5 (1 - mean dE00 / 100)``; higher is better."""
    return qu_from_parts(ssim(ref, test, params), mean_delta_e00(ref, test))


def qu_from_parts(ssim_value: float, mean_de00: float) -> float:
    return 0.5 * ssim_value + 0.5 * (1.0 - mean_de00 / 100.0)


def entropy(img: ImageBuffer) -> float:
    """Shannon entropy (bits) of the 256-bin luma histogram."""
    gray = to_grayscale(to_uint8(as_buffer(img))).data[..., 0]
    counts = np.bincount(gray.ravel(), minlength=256).astype(np.float64)
    p = counts[counts > 0] / gray.size
    return float(max(0.0, -np.sum(p * np.log2(p))))


def visible_edge_count(img: ImageBuffer, threshold: float = 25.0) -> EdgeCount:
    """Pixels whose luma Sobel magnitude (8-bit scale) exceeds ``threshold``."""
    gray = _gray_samples(img)
    count = int(np.count_nonzero(sobel_magnitude(gray) > threshold))
    return EdgeCount(count, count / gray.size)
