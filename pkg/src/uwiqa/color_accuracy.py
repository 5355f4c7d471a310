"""Full-reference colour-accuracy measures.

* :func:`ciede2000` - the CIEDE2000 colour difference with its term breakdown.
* :func:`reproduction_angular_error` - angle between a patch colour and the
  achromatic RGB diagonal. The angle ignores the vector's length, so a grey
  patch rendered white scores zero.
* :func:`euclidean_distance` - plain L2 distance in RGB or Lab.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

IMPERCEPTIBLE_DE00 = 1.0

_25_POW_7 = 25.0**7


@dataclass(frozen=True)
class Ciede2000Params:
    """Parametric weighting factors for lightness, chroma and hue."""

    kL: float = 1.0
    kC: float = 1.0
    kH: float = 1.0

    def __post_init__(self):
        if min(self.kL, self.kC, self.kH) <= 0:
            raise ValueError("CIEDE2000 weighting factors must be positive")


@dataclass(frozen=True)
class Ciede2000Breakdown:
    """Terms of one (or an array of) CIEDE2000 evaluations.

    ``dL``, ``dC`` and ``dH`` are the signed primed differences, ``SL``,
    ``SC``, ``SH`` the weighting functions and ``dR`` the rotation-term
    contribution ``RT * (dC / kC SC) * (dH / kH SH)``.
    """

    dL: float | np.ndarray
    dC: float | np.ndarray
    dH: float | np.ndarray
    SL: float | np.ndarray
    SC: float | np.ndarray
    SH: float | np.ndarray
    dR: float | np.ndarray
    value: float | np.ndarray
    params: Ciede2000Params = Ciede2000Params()

    def recombine(self):
        p = self.params
        return np.sqrt(
            (self.dL / (p.kL * self.SL)) ** 2
            + (self.dC / (p.kC * self.SC)) ** 2
            + (self.dH / (p.kH * self.SH)) ** 2
            + self.dR
        )

    @property
    def imperceptible(self):
        return self.value <= IMPERCEPTIBLE_DE00


def _norm(a, b):
    # np.hypot guards against overflow that Lab magnitudes never reach, at 3x the cost
    return np.sqrt(a * a + b * b)


def _hue_degrees(a, b):
    h = np.degrees(np.arctan2(b, a))
    h = np.where(h < 0.0, h + 360.0, h)
    return np.where((a == 0) & (b == 0), 0.0, h)


_COS_SIN = {d: (np.cos(np.radians(d)), np.sin(np.radians(d))) for d in (30.0, 6.0, 63.0)}


def _hue_weight(h):
    """T = 1 - 0.17 cos(h - 30) + 0.24 cos 2h + 0.32 cos(3h + 6) - 0.20 cos(4h - 63).

    The multiple angles are expanded from one cos/sin pair, which is
    cheaper than four cosines on large arrays.
    """
    c1, s1 = np.cos(h), np.sin(h)
    c2, s2 = 2.0 * c1 * c1 - 1.0, 2.0 * s1 * c1
    c3, s3 = c2 * c1 - s2 * s1, s2 * c1 + c2 * s1
    c4, s4 = 2.0 * c2 * c2 - 1.0, 2.0 * s2 * c2
    (k30, q30), (k6, q6), (k63, q63) = _COS_SIN[30.0], _COS_SIN[6.0], _COS_SIN[63.0]
    return (
        1.0
        - 0.17 * (c1 * k30 + s1 * q30)
        + 0.24 * c2
        + 0.32 * (c3 * k6 - s3 * q6)
        - 0.20 * (c4 * k63 + s4 * q63)
    )


def _pow7(x):
    # x**7 by repeated products; the generic pow() path is several times slower
    x3 = x * x * x
    return x3 * x3 * x


def _scalarize(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def ciede2000(ref, test, params: Ciede2000Params | None = None) -> Ciede2000Breakdown:
    """CIEDE2000 difference between two Lab colours (or arrays of them).

    Follows Sharma, Wu & Dalal (2005) step by step, including the hue
    conventions for zero chroma and for hue gaps larger than 180 degrees.

    Args:
        ref: ``(..., 3)`` Lab array or triple.
        test: same shape as ``ref``.
        params: kL, kC, kH; defaults to (1, 1, 1).

    Returns:
        Breakdown whose fields are floats for single colours and arrays
        otherwise.
    """
    params = params or Ciede2000Params()
    lab1 = np.asarray(ref, dtype=np.float64)
    lab2 = np.asarray(test, dtype=np.float64)
    # contiguous planes are much faster than strided channel views on big images
    L1, a1, b1 = (lab1[..., i].copy() for i in range(3))
    L2, a2, b2 = (lab2[..., i].copy() for i in range(3))

    C_bar = 0.5 * (_norm(a1, b1) + _norm(a2, b2))
    C_bar7 = _pow7(C_bar)
    G = 0.5 * (1.0 - np.sqrt(C_bar7 / (C_bar7 + _25_POW_7)))
    a1p = (1.0 + G) * a1
    a2p = (1.0 + G) * a2
    C1p = _norm(a1p, b1)
    C2p = _norm(a2p, b2)
    h1p = _hue_degrees(a1p, b1)
    h2p = _hue_degrees(a2p, b2)

    dLp = L2 - L1
    dCp = C2p - C1p
    Cprod = C1p * C2p
    zero = Cprod == 0
    dh = h2p - h1p
    dhp = np.where(dh > 180.0, dh - 360.0, np.where(dh < -180.0, dh + 360.0, dh))
    dhp = np.where(zero, 0.0, dhp)
    dHp = 2.0 * np.sqrt(Cprod) * np.sin(np.radians(dhp) / 2.0)

    Lp_bar = 0.5 * (L1 + L2)
    Cp_bar = 0.5 * (C1p + C2p)
    hsum = h1p + h2p
    hp_bar = np.where(
        np.abs(h1p - h2p) <= 180.0,
        0.5 * hsum,
        np.where(hsum < 360.0, 0.5 * (hsum + 360.0), 0.5 * (hsum - 360.0)),
    )
    hp_bar = np.where(zero, hsum, hp_bar)

    T = _hue_weight(np.radians(hp_bar))
    d_theta = 30.0 * np.exp(-(((hp_bar - 275.0) / 25.0) ** 2))
    Cp_bar7 = _pow7(Cp_bar)
    RC = 2.0 * np.sqrt(Cp_bar7 / (Cp_bar7 + _25_POW_7))
    L50 = (Lp_bar - 50.0) ** 2
    SL = 1.0 + 0.015 * L50 / np.sqrt(20.0 + L50)
    SC = 1.0 + 0.045 * Cp_bar
    SH = 1.0 + 0.015 * Cp_bar * T
    RT = -np.sin(np.radians(2.0 * d_theta)) * RC

    tL = dLp / (params.kL * SL)
    tC = dCp / (params.kC * SC)
    tH = dHp / (params.kH * SH)
    dR = RT * tC * tH
    # the rotation term can push the radicand a hair below zero for identical inputs
    value = np.sqrt(np.maximum(tL**2 + tC**2 + tH**2 + dR, 0.0))
    return Ciede2000Breakdown(
        *(_scalarize(x) for x in (dLp, dCp, dHp, SL, SC, SH, dR, value)), params=params
    )


def delta_e00(ref, test, params: Ciede2000Params | None = None):
    """Just the CIEDE2000 value(s)."""
    return ciede2000(ref, test, params).value


def _sorted_sum3(x):
    # fixed summation order makes the result independent of channel order
    x = np.sort(x, axis=-1)
    return (x[..., 0] + x[..., 1]) + x[..., 2]


def reproduction_angular_error(patch, per_pixel=False):
    """Angle in degrees between an RGB colour and the achromatic diagonal.

    Integer input is treated as 8-bit and normalised to [0, 1] first; the
    angle does not depend on that scaling.

    Args:
        patch: ``(3,)`` triple or ``(..., 3)`` array of non-negative RGB.
        per_pixel: for arrays, return the mean of per-colour angles instead of
            the elementwise array.

    Raises:
        ValueError: a zero (black) vector, whose angle is undefined, or
            negative components.
    """
    v = np.asarray(patch)
    if np.issubdtype(v.dtype, np.integer):
        v = v / 255.0
    v = v.astype(np.float64)
    if v.shape[-1] != 3:
        raise ValueError("expected RGB triples")
    if np.any(v < 0):
        raise ValueError("RGB components must be non-negative")
    if np.any(np.all(v == 0, axis=-1)):
        raise ValueError("angular error is undefined for the zero vector")
    r, g, b = v[..., 0], v[..., 1], v[..., 2]
    # |v x (1,1,1)| and v . (1,1,1); atan2 stays accurate near zero angle
    cross = np.sqrt(_sorted_sum3(np.stack([(g - b) ** 2, (b - r) ** 2, (r - g) ** 2], axis=-1)))
    dot = _sorted_sum3(v)
    phi = np.degrees(np.arctan2(cross, dot))
    if per_pixel:
        return float(np.mean(phi))
    return _scalarize(phi)


def euclidean_distance(a, b, space="rgb"):
    """L2 distance between colour triples expressed in ``space`` ('rgb' or 'lab')."""
    if space.lower() not in ("rgb", "lab"):
        raise ValueError(f"unknown colour space {space!r}")
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return _scalarize(np.sqrt(np.sum(diff**2, axis=-1)))
