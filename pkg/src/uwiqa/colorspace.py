"""sRGB <-> CIELab (D65, 2 degree observer) and cylindrical LCh coordinates.

Array functions take and return ``(..., 3)`` arrays. Integer inputs are read
as 8-bit samples, float inputs as unit-interval samples. Everything is
computed in float64.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# linear sRGB -> XYZ, IEC 61966-2-1 primaries with D65 white
SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
XYZ_TO_SRGB = np.linalg.inv(SRGB_TO_XYZ)
# reference white = image of RGB (1, 1, 1), so neutral inputs land on a = b = 0
D65_WHITE = SRGB_TO_XYZ.sum(axis=1)

_EPSILON = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0
SATURATION_EPS = 1e-6


class LabColor(NamedTuple):
    L: float
    a: float
    b: float


class LchColor(NamedTuple):
    L: float
    C: float
    h: float


def _unit_rgb(rgb):
    rgb = np.asarray(rgb)
    if np.issubdtype(rgb.dtype, np.integer):
        return rgb.astype(np.float64) / 255.0
    return rgb.astype(np.float64)


def srgb_decode(v):
    """Inverse sRGB companding (unit-interval values)."""
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.04045, v / 12.92, ((v + 0.055) / 1.055) ** 2.4)


_DECODE_LUT = srgb_decode(np.arange(256) / 255.0)


def srgb_encode(v):
    v = np.asarray(v, dtype=np.float64)
    return np.where(v <= 0.0031308, 12.92 * v, 1.055 * np.abs(v) ** (1.0 / 2.4) * np.sign(v) - 0.055)


def _linear_rgb(rgb):
    rgb = np.asarray(rgb)
    if rgb.dtype == np.uint8:
        # same formula, evaluated once per code value
        return _DECODE_LUT[rgb]
    return srgb_decode(_unit_rgb(rgb))


def srgb_to_lab(rgb) -> np.ndarray:
    """Convert sRGB samples to CIELab under D65.

    Args:
        rgb: ``(..., 3)`` array; integer dtype means 8-bit, float means [0, 1].

    Returns:
        ``(..., 3)`` float64 array of (L, a, b).
    """
    lin = _linear_rgb(rgb)
    xyz = lin @ SRGB_TO_XYZ.T
    t = xyz / D65_WHITE
    f = np.where(t > _EPSILON, np.cbrt(t), (_KAPPA * t + 16.0) / 116.0)
    L = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return np.stack([L, a, b], axis=-1)


def lab_to_srgb(lab, clip=True) -> np.ndarray:
    """Inverse of :func:`srgb_to_lab`, returning unit-interval sRGB."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    f = np.stack([fx, fy, fz], axis=-1)
    t = np.where(f**3 > _EPSILON, f**3, (116.0 * f - 16.0) / _KAPPA)
    # L drives Y directly below the knee
    t[..., 1] = np.where(lab[..., 0] > _KAPPA * _EPSILON, fy**3, lab[..., 0] / _KAPPA)
    lin = (t * D65_WHITE) @ XYZ_TO_SRGB.T
    if clip:
        lin = np.clip(lin, 0.0, 1.0)
    out = srgb_encode(lin)
    return np.clip(out, 0.0, 1.0) if clip else out


def lab_to_lch(lab) -> np.ndarray:
    """(L, a, b) -> (L, C, h) with h in degrees on [0, 360); h = 0 when C = 0."""
    lab = np.asarray(lab, dtype=np.float64)
    a, b = lab[..., 1], lab[..., 2]
    C = np.sqrt(a * a + b * b)
    h = np.mod(np.degrees(np.arctan2(b, a)), 360.0)
    h = np.where((C == 0.0) | (h >= 360.0), 0.0, h)
    return np.stack([lab[..., 0], C, h], axis=-1)


def lch_to_lab(lch) -> np.ndarray:
    lch = np.asarray(lch, dtype=np.float64)
    h = np.radians(lch[..., 2])
    return np.stack([lch[..., 0], lch[..., 1] * np.cos(h), lch[..., 1] * np.sin(h)], axis=-1)


def saturation(lch) -> np.ndarray:
    """Chroma over lightness, C / L, with 0 where L <= 1e-6."""
    lch = np.asarray(lch, dtype=np.float64)
    L, C = lch[..., 0], lch[..., 1]
    safe = L > SATURATION_EPS
    return np.where(safe, C / np.where(safe, L, 1.0), 0.0)


def to_lab_color(rgb) -> LabColor:
    """Single sRGB triple -> :class:`LabColor`."""
    return LabColor(*(float(v) for v in srgb_to_lab(rgb).reshape(3)))


def to_lch_color(lab) -> LchColor:
    return LchColor(*(float(v) for v in lab_to_lch(lab).reshape(3)))
