"""Colour-accuracy and image-quality measures for enhanced underwater images."""

__version__ = "0.1.0"

from .checker import (
    CheckerReference,
    PatchAnnotation,
    PatchScore,
    evaluate_checker,
    load_reference,
    parse_annotations,
    patch_mean_color,
)
from .color_accuracy import (
    Ciede2000Breakdown,
    Ciede2000Params,
    ciede2000,
    delta_e00,
    euclidean_distance,
    reproduction_angular_error,
)
from .colorspace import LabColor, LchColor, lab_to_lch, lab_to_srgb, saturation, srgb_to_lab
from .config import EvalConfig, load_config
from .constants import DEFAULT_CONSTANTS, MeasureConstants
from .generic import SsimParams, entropy, mse_psnr, qu, ssim, visible_edge_count
from .image import ImageBuffer, load_image, resize_bilinear, save_png, to_grayscale
from .nr_metrics import alpha_trimmed_stats, ccf, uciqe, uiqm
from .report import ComparisonReport, discover_layout, evaluate_batch, render_report
