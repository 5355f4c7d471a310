"""Small numeric kernels shared by the measures."""

import numpy as np
from scipy import ndimage

# largest Sobel magnitude on 8-bit data: 4 * 255 along both axes
SOBEL_MAX = 4.0 * 255.0 * np.sqrt(2.0)


def sobel_magnitude(channel: np.ndarray) -> np.ndarray:
    """Unnormalised 3x3 Sobel gradient magnitude with edge replication."""
    channel = np.asarray(channel, dtype=np.float64)
    gx = ndimage.sobel(channel, axis=1, mode="nearest")
    gy = ndimage.sobel(channel, axis=0, mode="nearest")
    return np.sqrt(gx * gx + gy * gy)


def block_extrema(channel: np.ndarray, block: int):
    """Per-block (min, max) over non-overlapping square blocks.

    Trailing rows and columns that do not fill a whole block are dropped.
    """
    h, w = channel.shape
    k1, k2 = h // block, w // block
    if k1 == 0 or k2 == 0:
        raise ValueError(f"image of {w}x{h} pixels is smaller than one {block}x{block} block")
    tiles = channel[: k1 * block, : k2 * block].reshape(k1, block, k2, block)
    return tiles.min(axis=(1, 3)), tiles.max(axis=(1, 3))
