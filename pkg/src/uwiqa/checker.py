"""Colour-checker protocol: annotated patches scored against a reference chart.

Patches are polygons in LabelMe's export format (a ``"shapes"`` array of
``{"label", "points"}`` objects, coordinates in pixels with pixel centres on
integer positions). Each patch's colour is the mean of the pixels strictly
inside the polygon after eroding it by a margin, and is scored with the
angular reproduction error (achromatic patches) and CIEDE2000 against the
chart's reference colour.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .color_accuracy import ciede2000, reproduction_angular_error
from .colorspace import srgb_to_lab
from .image import ImageBuffer, as_buffer


class AnnotationError(ValueError):
    pass


class CheckerError(ValueError):
    pass


@dataclass(frozen=True)
class PatchAnnotation:
    label: str
    polygon: tuple

    def __post_init__(self):
        poly = tuple((float(x), float(y)) for x, y in self.polygon)
        if len(poly) < 3:
            raise AnnotationError(f"patch {self.label!r}: polygon needs at least 3 vertices")
        object.__setattr__(self, "polygon", poly)


@dataclass(frozen=True)
class ReferencePatch:
    label: str
    srgb: tuple
    achromatic: bool


@dataclass(frozen=True)
class CheckerReference:
    patches: tuple

    def __post_init__(self):
        labels = [p.label for p in self.patches]
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        if dupes:
            raise CheckerError(f"duplicate reference labels: {', '.join(dupes)}")
        object.__setattr__(self, "_index", {p.label: p for p in self.patches})

    @property
    def labels(self):
        return [p.label for p in self.patches]

    @property
    def achromatic_labels(self):
        return [p.label for p in self.patches if p.achromatic]

    def __getitem__(self, label) -> ReferencePatch:
        return self._index[label]

    def __contains__(self, label):
        return label in self._index

    def lab(self, label) -> np.ndarray:
        return srgb_to_lab(np.asarray(self[label].srgb, dtype=np.float64) / 255.0)

    @classmethod
    def from_records(cls, records) -> "CheckerReference":
        patches = []
        for i, rec in enumerate(records):
            try:
                srgb = tuple(float(v) for v in rec["srgb"])
                label = str(rec["label"])
                achromatic = bool(rec.get("achromatic", False))
            except (KeyError, TypeError, ValueError) as exc:
                raise CheckerError(f"reference entry {i} is malformed: {exc}") from exc
            if len(srgb) != 3 or not all(0.0 <= v <= 255.0 for v in srgb):
                raise CheckerError(f"reference entry {label!r}: srgb must be three values in [0, 255]")
            patches.append(ReferencePatch(label, srgb, achromatic))
        return cls(tuple(patches))

    def to_records(self):
        return [{"label": p.label, "srgb": list(p.srgb), "achromatic": p.achromatic} for p in self.patches]


def load_reference(path=None) -> CheckerReference:
    """Read a reference chart JSON; without a path, the classic 24-patch chart."""
    if path is None:
        text = resources.files("uwiqa").joinpath("data/colorchecker_classic.json").read_text()
        source = "built-in chart"
    else:
        text = Path(path).read_text()
        source = str(path)
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckerError(f"{source}: invalid JSON ({exc})") from exc
    if not isinstance(records, list):
        raise CheckerError(f"{source}: expected a JSON array of patches")
    return CheckerReference.from_records(records)


def parse_annotations(path):
    """Read LabelMe-style polygon annotations.

    Rectangle shapes (two corner points) are expanded to four vertices.

    Raises:
        AnnotationError: malformed JSON, duplicate labels, or polygons with
            fewer than three points.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"{path}: malformed JSON ({exc})") from exc
    shapes = doc.get("shapes") if isinstance(doc, dict) else None
    if not isinstance(shapes, list):
        raise AnnotationError(f"{path}: missing 'shapes' array")
    seen = set()
    out = []
    for i, shape in enumerate(shapes):
        try:
            label = shape["label"]
            points = [(float(x), float(y)) for x, y in shape["points"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise AnnotationError(f"{path}: shape {i} is malformed ({exc})") from exc
        if shape.get("shape_type") == "rectangle" and len(points) == 2:
            (x0, y0), (x1, y1) = points
            points = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        if label in seen:
            raise AnnotationError(f"{path}: duplicate label {label!r}")
        seen.add(label)
        if len(points) < 3:
            raise AnnotationError(f"{path}: shape {label!r} has {len(points)} points, need at least 3")
        out.append(PatchAnnotation(label, tuple(points)))
    return out


def _inside_even_odd(px, py, poly):
    inside = np.zeros(px.shape, dtype=bool)
    n = len(poly)
    for i in range(n):
        xi, yi = poly[i]
        xj, yj = poly[(i + 1) % n]
        if yi == yj:
            continue
        crosses = (yi > py) != (yj > py)
        x_at = (xj - xi) * (py - yi) / (yj - yi) + xi
        inside ^= crosses & (px < x_at)
    return inside


def _boundary_distance(px, py, poly):
    dist = np.full(px.shape, np.inf)
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        seg2 = dx * dx + dy * dy
        if seg2 == 0.0:
            t = np.zeros(px.shape)
        else:
            t = np.clip(((px - x0) * dx + (py - y0) * dy) / seg2, 0.0, 1.0)
        dist = np.minimum(dist, np.hypot(px - (x0 + t * dx), py - (y0 + t * dy)))
    return dist


def patch_mask(shape, poly: PatchAnnotation, erosion=2.0) -> np.ndarray:
    """Boolean mask of pixels strictly inside ``poly`` and farther than ``erosion`` from its edge."""
    h, w = shape[:2]
    pts = np.asarray(poly.polygon)
    x_lo = max(int(np.floor(pts[:, 0].min())), 0)
    x_hi = min(int(np.ceil(pts[:, 0].max())), w - 1)
    y_lo = max(int(np.floor(pts[:, 1].min())), 0)
    y_hi = min(int(np.ceil(pts[:, 1].max())), h - 1)
    mask = np.zeros((h, w), dtype=bool)
    if x_lo > x_hi or y_lo > y_hi:
        return mask
    py, px = np.mgrid[y_lo : y_hi + 1, x_lo : x_hi + 1].astype(np.float64)
    inside = _inside_even_odd(px, py, poly.polygon)
    inside &= _boundary_distance(px, py, poly.polygon) > erosion
    mask[y_lo : y_hi + 1, x_lo : x_hi + 1] = inside
    return mask


def patch_pixels(img: ImageBuffer, poly: PatchAnnotation, erosion=2.0) -> np.ndarray:
    """``(N, 3)`` pixel samples (8-bit scale) inside the eroded polygon."""
    img = as_buffer(img)
    pixels = img.samples()[patch_mask(img.shape, poly, erosion)]
    if pixels.shape[0] == 0:
        raise CheckerError(f"patch {poly.label!r} has no pixels left after {erosion}px erosion")
    return pixels


def patch_mean_color(img: ImageBuffer, poly: PatchAnnotation, erosion=2.0, statistic="mean") -> np.ndarray:
    """Mean (or median) sRGB colour of a patch, on the 8-bit scale."""
    return _summarize(patch_pixels(img, poly, erosion), statistic)


def _summarize(pixels, statistic):
    if statistic == "mean":
        return pixels.mean(axis=0)
    if statistic == "median":
        return np.median(pixels, axis=0)
    raise ValueError(f"unknown patch statistic {statistic!r}")


@dataclass
class PatchScore:
    label: str
    measured_rgb: tuple
    phi_degrees: float | None
    delta_e00: float
    achromatic: bool
    # per measure ("phi", "de2000"): error larger than on the original image
    worse_than_original: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "label": self.label,
            "measured_rgb": list(self.measured_rgb),
            "phi_degrees": self.phi_degrees,
            "delta_e00": self.delta_e00,
            "achromatic": self.achromatic,
            "worse_than_original": dict(self.worse_than_original),
        }


def evaluate_checker(
    img: ImageBuffer,
    annotations,
    reference: CheckerReference | None = None,
    original_scores=None,
    *,
    erosion=2.0,
    statistic="mean",
    phi_mode="mean",
    phi_all_patches=False,
):
    """Score every annotated patch against the reference chart.

    Args:
        img: image showing the chart.
        annotations: patch polygons; every label must exist in ``reference``.
        reference: chart colours; the built-in 24-patch chart by default.
        original_scores: scores of the same patches on the unenhanced image;
            when given, ``worse_than_original`` marks errors that grew.
        erosion: margin in pixels removed from each polygon.
        statistic: ``"mean"`` or ``"median"`` patch colour.
        phi_mode: ``"mean"`` takes the angle of the patch colour;
            ``"per_pixel"`` averages per-pixel angles.
        phi_all_patches: compute the angle on chromatic patches too.

    Returns:
        list of :class:`PatchScore` in annotation order.
    """
    img = as_buffer(img)
    reference = reference or load_reference()
    unknown = [a.label for a in annotations if a.label not in reference]
    if unknown:
        raise CheckerError(f"annotation labels not in reference chart: {', '.join(unknown)}")
    if phi_mode not in ("mean", "per_pixel"):
        raise ValueError(f"unknown phi mode {phi_mode!r}")
    originals = {s.label: s for s in (original_scores or [])}

    scores = []
    for ann in annotations:
        ref = reference[ann.label]
        pixels = patch_pixels(img, ann, erosion)
        rgb = _summarize(pixels, statistic)
        phi = None
        if ref.achromatic or phi_all_patches:
            try:
                if phi_mode == "mean":
                    phi = float(reproduction_angular_error(rgb))
                else:
                    lit = pixels[np.any(pixels > 0, axis=1)]
                    phi = reproduction_angular_error(lit, per_pixel=True)
            except ValueError as exc:
                raise CheckerError(f"patch {ann.label!r}: {exc}") from exc
        de = float(ciede2000(reference.lab(ann.label), srgb_to_lab(rgb / 255.0)).value)
        score = PatchScore(ann.label, tuple(float(v) for v in rgb), phi, de, ref.achromatic)
        orig = originals.get(ann.label)
        if orig is not None:
            if phi is not None and orig.phi_degrees is not None:
                score.worse_than_original["phi"] = phi > orig.phi_degrees
            score.worse_than_original["de2000"] = de > orig.delta_e00
        scores.append(score)
    return scores
