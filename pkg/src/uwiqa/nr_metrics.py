"""No-reference underwater quality measures: UCIQE, UIQM and CCF.

Each measure returns a breakdown holding its attribute terms next to the
weighted total, because what matters when a score looks wrong is which
attribute moved it.

Images are read on the 8-bit scale. The CCF component formulas are a
reconstruction (log-opponent colourfulness, edge-masked gradient contrast,
reciprocal edge-energy fog index); see :func:`ccf`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import block_extrema, sobel_magnitude
from .colorspace import lab_to_lch, saturation, srgb_to_lab
from .constants import DEFAULT_CONSTANTS, MeasureConstants
from .image import LUMA_WEIGHTS, ImageBuffer, as_buffer, round_half_away, to_grayscale, to_uint8


@dataclass(frozen=True)
class TrimmedStats:
    mean: float
    variance: float
    alpha: float


@dataclass(frozen=True)
class UciqeBreakdown:
    sigma_c: float
    con_l: float
    mu_s: float
    value: float


@dataclass(frozen=True)
class UiqmBreakdown:
    uicm: float
    uism: float
    uiconm: float
    value: float


@dataclass(frozen=True)
class CcfBreakdown:
    colorfulness: float
    contrast: float
    fog_density: float
    value: float


def _weighted(weights, terms):
    return float(sum(w * t for w, t in zip(weights, terms)))


def _rgb(img):
    img = as_buffer(img)
    if img.channels != 3:
        raise ValueError("measure needs a 3-channel image")
    return img, img.samples()


def alpha_trimmed_stats(values, alpha=0.1) -> TrimmedStats:
    """Mean and variance after discarding ceil(alpha * N) samples per tail.

    The variance is the population variance of the retained samples.

    Raises:
        ValueError: alpha outside [0, 0.5) or nothing left after trimming.
    """
    if not 0.0 <= alpha < 0.5:
        raise ValueError("alpha must lie in [0, 0.5)")
    x = np.sort(np.asarray(values, dtype=np.float64).ravel())
    n = x.size
    # rounding guards against alpha * n landing a hair above an integer
    k = math.ceil(round(alpha * n, 9))
    kept = x[k : n - k]
    if kept.size == 0:
        raise ValueError(f"no samples left after trimming {k} from each tail of {n}")
    mean = float(np.mean(kept))
    mean = min(max(mean, float(kept[0])), float(kept[-1]))
    return TrimmedStats(mean=mean, variance=float(np.mean((kept - mean) ** 2)), alpha=alpha)


def _extreme_mean_gap(lum, fraction):
    flat = lum.ravel()
    n = max(1, int(round_half_away(fraction * flat.size)))
    if 2 * n < flat.size:
        flat = np.partition(flat, (n - 1, flat.size - n))
    # sorting the tails fixes the summation order whatever the pixel order
    low, high = np.sort(flat[:n]), np.sort(flat[-n:])
    return float(np.mean(high) - np.mean(low))


def uciqe(img: ImageBuffer, constants: MeasureConstants = DEFAULT_CONSTANTS) -> UciqeBreakdown:
    """Underwater Colour Image Quality Evaluation.

    ``sigma_c`` is the population std-dev of chroma (divided by
    ``uciqe_chroma_scale``), ``con_l`` the gap between the mean of the top 1%
    and the bottom 1% of lightness divided by 100, and ``mu_s`` the mean of
    per-pixel C / L.
    """
    img, _ = _rgb(img)
    lch = lab_to_lch(srgb_to_lab(img.data))
    chroma = lch[..., 1] / constants.uciqe_chroma_scale
    sigma_c = float(np.std(chroma))
    if constants.uciqe_luminance == "lab":
        con_l = _extreme_mean_gap(lch[..., 0], constants.uciqe_extreme_fraction) / 100.0
    else:
        luma = to_grayscale(to_uint8(img)).samples()[..., 0] / 255.0
        con_l = _extreme_mean_gap(luma, constants.uciqe_extreme_fraction)
    con_l = min(max(con_l, 0.0), 1.0)
    mu_s = float(np.mean(saturation(lch)))
    terms = (sigma_c, con_l, mu_s)
    return UciqeBreakdown(*terms, value=_weighted(constants.uciqe_weights, terms))


def uicm(rgb: np.ndarray, constants: MeasureConstants = DEFAULT_CONSTANTS) -> float:
    """Colourfulness from alpha-trimmed statistics of the RG and YB opponent channels."""
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    rg = alpha_trimmed_stats(r - g, constants.uicm_alpha)
    yb = alpha_trimmed_stats((r + g) / 2.0 - b, constants.uicm_alpha)
    c_mean, c_var = constants.uicm_coeffs
    return float(
        c_mean * math.sqrt(rg.mean**2 + yb.mean**2) + c_var * math.sqrt(rg.variance + yb.variance)
    )


def eme(channel: np.ndarray, block: int) -> float:
    """Block log-ratio contrast, ``2 / (k1 k2) * sum log(max / min)``.

    Blocks with ``min == 0`` or ``max == min`` contribute 0.
    """
    lo, hi = block_extrema(channel, block)
    valid = (lo > 0) & (hi > lo)
    ratios = np.where(valid, hi / np.where(valid, lo, 1.0), 1.0)
    return float(2.0 / lo.size * np.sum(np.log(ratios)))


def uism(rgb: np.ndarray, constants: MeasureConstants = DEFAULT_CONSTANTS) -> float:
    """Sharpness: EME of each channel weighted by its Sobel magnitude, luma-combined."""
    total = 0.0
    for c, weight in enumerate(LUMA_WEIGHTS):
        channel = rgb[..., c]
        total += weight * eme(channel * sobel_magnitude(channel), constants.block_size)
    return float(total)


def _plip_scalar_mult(c, x, gamma):
    return gamma - gamma * (1.0 - x / gamma) ** c


def uiconm(gray: np.ndarray, constants: MeasureConstants = DEFAULT_CONSTANTS) -> float:
    """Contrast: mean of ``-m log m`` over blocks, ``m = (max - min) / (max + min)``.

    With ``uiconm_plip`` set, the block differences, sums and final averaging
    use PLIP arithmetic with parameter ``plip_gamma``.
    """
    lo, hi = block_extrema(gray, constants.block_size)
    if constants.uiconm_plip:
        gamma = constants.plip_gamma
        top = gamma * (hi - lo) / (gamma - lo)
        bottom = hi + lo - hi * lo / gamma
    else:
        top, bottom = hi - lo, hi + lo
    valid = (bottom > 0) & (top > 0)
    m = np.where(valid, top / np.where(valid, bottom, 1.0), 1.0)
    s = float(np.sum(-m * np.log(m)))
    if constants.uiconm_plip:
        return float(_plip_scalar_mult(1.0 / lo.size, s, constants.plip_gamma))
    return s / lo.size


def uiqm(img: ImageBuffer, constants: MeasureConstants = DEFAULT_CONSTANTS) -> UiqmBreakdown:
    """Underwater Image Quality Measure, ``w1 UICM + w2 UISM + w3 UIConM``.

    Raises:
        ValueError: image smaller than one block.
    """
    img, rgb = _rgb(img)
    gray = to_grayscale(to_uint8(img)).samples()[..., 0]
    terms = (uicm(rgb, constants), uism(rgb, constants), uiconm(gray, constants))
    return UiqmBreakdown(*terms, value=_weighted(constants.uiqm_weights, terms))


def _log_opponent_colorfulness(rgb):
    # +1 offset keeps log finite on black pixels
    lr, lg, lb = (np.log(rgb[..., c] + 1.0) for c in range(3))
    alpha = lr - lg
    beta = np.log((rgb[..., 0] + rgb[..., 1]) / 2.0 + 1.0) - lb
    sigma = math.sqrt(float(np.var(alpha)) + float(np.var(beta)))
    mu = math.hypot(float(np.mean(alpha)), float(np.mean(beta)))
    return sigma + 0.3 * mu


def ccf(img: ImageBuffer, constants: MeasureConstants = DEFAULT_CONSTANTS) -> CcfBreakdown:
    """Colourfulness, contrast and fog-density index.

    Components, all on luma for the edge terms:

    * colorfulness: ``sigma + 0.3 mu`` of the log-opponent channels
      ``log R - log G`` and ``log((R + G) / 2) - log B``.
    * contrast: per-pixel mean of the gradient magnitude (Sobel / 8, grey
      levels per pixel) where the raw Sobel magnitude exceeds
      ``edge_threshold``, zero elsewhere.
    * fog_density: ``1 / (1 + E)``, with ``E`` the per-pixel mean of the
      squared masked gradient divided by 255.
    """
    img, rgb = _rgb(img)
    gray = to_grayscale(to_uint8(img)).samples()[..., 0]
    mag = sobel_magnitude(gray)
    grad = np.where(mag > constants.edge_threshold, mag / 8.0, 0.0)
    colorfulness = _log_opponent_colorfulness(rgb)
    contrast = float(np.mean(grad))
    fog = 1.0 / (1.0 + float(np.mean(grad**2)) / 255.0)
    terms = (colorfulness, contrast, fog)
    return CcfBreakdown(*terms, value=_weighted(constants.ccf_weights, terms))
