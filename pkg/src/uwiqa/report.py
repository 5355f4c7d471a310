"""Batch evaluation of scene folders and comparison-table rendering.

A dataset root holds one folder per scene::

    root/
      R1/
        original.png        # the unenhanced capture
        fusion.png          # one image per method, named after the method
        ucolor.jpg
        annotations.json    # optional LabelMe polygons of the chart patches
        reference.json      # optional chart colours for this scene

The report is a scene x method x measure table. In every row the best
method value is flagged (ties flag every tied cell) and each method value
that is worse than the original image's, under the measure's polarity, is
flagged as well.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .checker import evaluate_checker, load_reference, parse_annotations
from .color_accuracy import IMPERCEPTIBLE_DE00
from .config import EvalConfig
from .generic import entropy, mean_delta_e00, mse_psnr, qu_from_parts, ssim, visible_edge_count
from .image import load_image, preprocess
from .nr_metrics import ccf, uciqe, uiqm

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
ORIGINAL = "original"

HIGHER = "higher"
LOWER = "lower"


@dataclass(frozen=True)
class MeasureSpec:
    kind: str  # "nr", "fr" (needs the original) or "checker" (needs annotations)
    polarity: str
    decimals: int


MEASURES = {
    "uciqe": MeasureSpec("nr", HIGHER, 2),
    "uiqm": MeasureSpec("nr", HIGHER, 2),
    "ccf": MeasureSpec("nr", HIGHER, 2),
    "entropy": MeasureSpec("nr", HIGHER, 2),
    "edges": MeasureSpec("nr", HIGHER, 0),
    "mse": MeasureSpec("fr", LOWER, 2),
    "psnr": MeasureSpec("fr", HIGHER, 2),
    "ssim": MeasureSpec("fr", HIGHER, 4),
    "qu": MeasureSpec("fr", HIGHER, 4),
    "de2000": MeasureSpec("checker", LOWER, 2),
    "phi": MeasureSpec("checker", LOWER, 2),
}
DEFAULT_MEASURES = ("uciqe", "uiqm", "ccf")


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Scene:
    name: str
    original: Path | None
    methods: dict
    annotations: Path | None = None
    reference: Path | None = None


@dataclass(frozen=True)
class DatasetLayout:
    root: Path
    scenes: tuple

    @property
    def methods(self):
        names = set()
        for scene in self.scenes:
            names.update(scene.methods)
        return sorted(names)


def discover_layout(root) -> DatasetLayout:
    """Scan ``root`` for scene folders.

    Raises:
        LayoutError: root missing, or two images in a scene share a method name.
    """
    root = Path(root)
    if not root.is_dir():
        raise LayoutError(f"{root}: not a directory")
    scenes = []
    for folder in sorted(p for p in root.iterdir() if p.is_dir()):
        original, methods = None, {}
        for f in sorted(folder.iterdir()):
            if f.suffix.lower() not in IMAGE_SUFFIXES:
                continue
            if f.stem.lower() == ORIGINAL:
                original = f
            elif f.stem in methods:
                raise LayoutError(f"{folder}: two images for method {f.stem!r}")
            else:
                methods[f.stem] = f
        if original is None and not methods:
            continue
        ann = folder / "annotations.json"
        ref = folder / "reference.json"
        scenes.append(
            Scene(folder.name, original, methods, ann if ann.is_file() else None, ref if ref.is_file() else None)
        )
    return DatasetLayout(root, tuple(scenes))


@dataclass
class Cell:
    value: float | None = None
    status: str = "ok"  # "ok", "error" or "unavailable"
    reason: str = ""
    best_in_row: bool = False
    worse_than_original: bool = False
    # colour differences at or below the visibility threshold
    imperceptible: bool = False

    def to_dict(self):
        return {
            "value": self.value,
            "status": self.status,
            "reason": self.reason,
            "best_in_row": self.best_in_row,
            "worse_than_original": self.worse_than_original,
            "imperceptible": self.imperceptible,
        }


@dataclass
class ComparisonReport:
    """Score table with per-cell flags.

    ``rows`` are ``(scene, measure, item)`` triples, where ``item`` names a
    chart patch for checker measures and is empty otherwise. ``cells`` maps
    ``(scene, measure, item, column)`` to a :class:`Cell`.
    """

    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    cells: dict = field(default_factory=dict)
    polarity: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def cell(self, scene, measure, column, item=""):
        return self.cells[(scene, measure, item, column)]

    @property
    def has_errors(self):
        return any(c.status == "error" for c in self.cells.values())

    def to_dict(self):
        cells = []
        for (scene, measure, item, column), c in self.cells.items():
            cells.append({"scene": scene, "measure": measure, "item": item, "column": column, **c.to_dict()})
        return {
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "cells": cells,
            "polarity": dict(self.polarity),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d) -> "ComparisonReport":
        cells = {}
        for c in d["cells"]:
            key = (c["scene"], c["measure"], c["item"], c["column"])
            cells[key] = Cell(
                c["value"], c["status"], c["reason"], c["best_in_row"], c["worse_than_original"],
                c.get("imperceptible", False),
            )
        return cls(
            columns=list(d["columns"]),
            rows=[tuple(r) for r in d["rows"]],
            cells=cells,
            polarity=dict(d["polarity"]),
            provenance=d["provenance"],
        )


def apply_flags(report: ComparisonReport) -> ComparisonReport:
    """Set ``best_in_row`` and ``worse_than_original`` on every row.

    Only method columns compete for best; the original column is the
    baseline and is never flagged. ``de2000`` cells at or below 1 are also
    marked ``imperceptible``.
    """
    methods = [c for c in report.columns if c != ORIGINAL]
    for scene, measure, item in report.rows:
        lower = report.polarity[measure] == LOWER
        row = {col: report.cells.get((scene, measure, item, col)) for col in report.columns}
        for c in row.values():
            if c is not None:
                c.best_in_row = c.worse_than_original = False
                c.imperceptible = measure == "de2000" and c.status == "ok" and c.value <= IMPERCEPTIBLE_DE00
        scored = {
            col: row[col].value
            for col in methods
            if row[col] is not None and row[col].status == "ok" and not math.isnan(row[col].value)
        }
        if scored:
            best = min(scored.values()) if lower else max(scored.values())
            for col, v in scored.items():
                row[col].best_in_row = v == best
        orig = row.get(ORIGINAL)
        if orig is not None and orig.status == "ok" and not math.isnan(orig.value):
            for col, v in scored.items():
                row[col].worse_than_original = v > orig.value if lower else v < orig.value
    return report


# -- evaluation ---------------------------------------------------------------


def _load(path, config):
    return preprocess(load_image(path), quarter=config.preprocess_quarter)


def _nr_value(name, img, config):
    c = config.constants
    if name == "uciqe":
        return uciqe(img, c).value
    if name == "uiqm":
        return uiqm(img, c).value
    if name == "ccf":
        return ccf(img, c).value
    if name == "entropy":
        return entropy(img)
    if name == "edges":
        return float(visible_edge_count(img, c.edge_threshold).count)
    raise KeyError(name)


def _fr_value(name, ref, img, config, cache):
    # psnr/mse and ssim/qu share work, so each pair is computed once per image
    if name in ("mse", "psnr"):
        if "mse_psnr" not in cache:
            cache["mse_psnr"] = mse_psnr(ref, img)
        return cache["mse_psnr"][0 if name == "mse" else 1]
    if name in ("ssim", "qu"):
        if "ssim" not in cache:
            cache["ssim"] = ssim(ref, img, config.ssim)
        if name == "ssim":
            return cache["ssim"]
        return qu_from_parts(cache["ssim"], mean_delta_e00(ref, img))
    raise KeyError(name)


def _error(exc):
    return {"status": "error", "reason": f"{type(exc).__name__}: {exc}"}


def evaluate_unit(scene: Scene, column: str, measures, config: EvalConfig, global_reference=None):
    """Scores of one image (``column`` of ``scene``).

    Every failure is caught and recorded against the affected cells.

    Returns:
        list of ``(measure, item, cell_dict)``.
    """
    path = scene.original if column == ORIGINAL else scene.methods.get(column)
    out = []
    if path is None:
        return [(m, "", {"status": "unavailable", "reason": "no image"}) for m in measures]
    try:
        img = _load(path, config)
    except Exception as exc:  # noqa: BLE001 - recorded per cell
        return [(m, "", _error(exc)) for m in measures]

    ref_img, ref_exc = None, None
    fr_cache = {}
    for m in measures:
        kind = MEASURES[m].kind
        if kind == "nr":
            try:
                out.append((m, "", {"value": float(_nr_value(m, img, config))}))
            except Exception as exc:  # noqa: BLE001
                out.append((m, "", _error(exc)))
        elif kind == "fr":
            if column == ORIGINAL:
                out.append((m, "", {"status": "unavailable", "reason": "reference image"}))
                continue
            if scene.original is None:
                out.append((m, "", {"status": "error", "reason": "scene has no original image"}))
                continue
            if ref_img is None and ref_exc is None:
                try:
                    ref_img = _load(scene.original, config)
                except Exception as exc:  # noqa: BLE001
                    ref_exc = exc
            if ref_exc is not None:
                out.append((m, "", _error(ref_exc)))
                continue
            try:
                out.append((m, "", {"value": float(_fr_value(m, ref_img, img, config, fr_cache))}))
            except Exception as exc:  # noqa: BLE001
                out.append((m, "", _error(exc)))
    checker_measures = [m for m in measures if MEASURES[m].kind == "checker"]
    if checker_measures:
        out.extend(_checker_cells(scene, img, checker_measures, config, global_reference))
    return out


def _checker_cells(scene, img, measures, config, global_reference):
    if scene.annotations is None:
        return [(m, "", {"status": "error", "reason": "scene has no annotations.json"}) for m in measures]
    try:
        annotations = parse_annotations(scene.annotations)
        if scene.reference is not None:
            reference = load_reference(scene.reference)
        elif global_reference is not None:
            reference = load_reference(global_reference)
        else:
            reference = load_reference()
    except Exception as exc:  # noqa: BLE001
        return [(m, "", _error(exc)) for m in measures]
    s = config.checker
    out = []
    for ann in annotations:
        try:
            (score,) = evaluate_checker(
                img,
                [ann],
                reference,
                erosion=s.erosion,
                statistic=s.statistic,
                phi_mode=s.phi_mode,
                phi_all_patches=s.phi_all_patches,
            )
        except Exception as exc:  # noqa: BLE001
            err = _error(exc)
            for m in measures:
                if m == "de2000" or ann.label in reference and (reference[ann.label].achromatic or s.phi_all_patches):
                    out.append((m, ann.label, err))
            continue
        if "de2000" in measures:
            out.append(("de2000", ann.label, {"value": score.delta_e00}))
        if "phi" in measures and score.phi_degrees is not None:
            out.append(("phi", ann.label, {"value": score.phi_degrees}))
    return out


def _run_unit(args):
    return args[0].name, args[1], evaluate_unit(*args)


def evaluate_batch(
    layout: DatasetLayout,
    config: EvalConfig | None = None,
    measures=DEFAULT_MEASURES,
    *,
    reference_chart=None,
    workers: int | None = 1,
) -> ComparisonReport:
    """Evaluate every (scene, image) pair and assemble a flagged report.

    Args:
        layout: scenes to evaluate.
        config: evaluation settings.
        measures: names from :data:`MEASURES`, in row order.
        reference_chart: chart JSON used by scenes without their own.
        workers: process count; 1 evaluates in-process. The report does not
            depend on the worker count or on scheduling.
    """
    config = config or EvalConfig()
    measures = list(measures)
    unknown = [m for m in measures if m not in MEASURES]
    if unknown:
        raise ValueError(f"unknown measures: {', '.join(unknown)}")
    columns = [ORIGINAL] + layout.methods
    tasks = [(scene, col, measures, config, reference_chart) for scene in layout.scenes for col in columns]

    if workers == 1 or len(tasks) <= 1:
        results = [_run_unit(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_unit, tasks))

    by_key = {}
    items = {}
    for scene_name, column, cells in results:
        for measure, item, cell in cells:
            by_key[(scene_name, measure, item, column)] = Cell(**cell)
            items.setdefault((scene_name, measure), [])
            if item not in items[(scene_name, measure)]:
                items[(scene_name, measure)].append(item)

    rows = []
    for measure in measures:
        for scene in layout.scenes:
            row_items = items.get((scene.name, measure), [""])
            if len(row_items) > 1 and "" in row_items:
                # an image-level failure applies to every patch row of that column
                row_items = [i for i in row_items if i]
                for col in columns:
                    whole = by_key.pop((scene.name, measure, "", col), None)
                    if whole is None:
                        continue
                    for item in row_items:
                        by_key.setdefault((scene.name, measure, item, col), Cell(**whole.to_dict()))
            for item in row_items:
                rows.append((scene.name, measure, item))
                for col in columns:
                    by_key.setdefault((scene.name, measure, item, col), Cell(None, "unavailable", "no value"))

    report = ComparisonReport(
        columns=columns,
        rows=rows,
        cells={(s, m, i, c): by_key[(s, m, i, c)] for s, m, i in rows for c in columns},
        polarity={m: MEASURES[m].polarity for m in measures},
        provenance={
            "package_version": __version__,
            "constants_version": config.constants.version,
            "config_sha256": config.digest(),
            "preprocess_quarter": config.preprocess_quarter,
            "measures": measures,
            "reconstructions": [m for m in measures if m in ("ccf", "qu")],
        },
    )
    return apply_flags(report)


# -- rendering ----------------------------------------------------------------

WORSE_MARKER = "†"  # dagger
IMPERCEPTIBLE_MARKER = "≈"


def _fmt(measure, value):
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    spec = MEASURES.get(measure)
    decimals = spec.decimals if spec else 4
    return f"{value:.{decimals}f}"


def _render_markdown(report):
    lines = ["# Comparison report", ""]
    if not report.rows:
        lines.append("No results.")
        return "\n".join(lines) + "\n"
    with_items = any(item for _, _, item in report.rows)
    head = ["measure", "scene"] + (["patch"] if with_items else []) + list(report.columns)
    lines.append("| " + " | ".join(head) + " |")
    lines.append("|" + "|".join(["---"] * (len(head) - len(report.columns)) + ["---:"] * len(report.columns)) + "|")
    for scene, measure, item in report.rows:
        cols = [measure, scene] + ([item] if with_items else [])
        for col in report.columns:
            c = report.cells[(scene, measure, item, col)]
            if c.status == "error":
                text = "error"
            elif c.status == "unavailable":
                text = "-"
            else:
                text = _fmt(measure, c.value)
                if c.best_in_row:
                    text = f"**{text}**"
                if c.imperceptible:
                    text = f"{text} {IMPERCEPTIBLE_MARKER}"
                if c.worse_than_original:
                    text = f"{text} {WORSE_MARKER}"
            cols.append(text)
        lines.append("| " + " | ".join(cols) + " |")
    lines.append("")
    lines.append("Bold: best method value in the row. Dagger: worse than the original image.")
    if any(c.imperceptible for c in report.cells.values()):
        lines.append("Approx sign: colour difference of at most 1 (imperceptible).")
    polar = ", ".join(f"{m} ({p} is better)" for m, p in report.polarity.items())
    lines.append(f"Polarity: {polar}.")
    prov = report.provenance
    if prov:
        lines.append(
            f"Constants v{prov.get('constants_version')}, config sha256 {str(prov.get('config_sha256', ''))[:12]}, "
            f"quarter-resize {'on' if prov.get('preprocess_quarter') else 'off'}."
        )
        if prov.get("reconstructions"):
            lines.append(f"Reconstructed measure definitions: {', '.join(prov['reconstructions'])}.")
    return "\n".join(lines) + "\n"


def _render_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["scene", "measure", "item", "method", "value", "status", "reason", "best_in_row", "worse_than_original",
         "imperceptible"]
    )
    for scene, measure, item in report.rows:
        for col in report.columns:
            c = report.cells[(scene, measure, item, col)]
            value = "" if c.value is None else repr(float(c.value))
            w.writerow(
                [scene, measure, item, col, value, c.status, c.reason, int(c.best_in_row),
                 int(c.worse_than_original), int(c.imperceptible)]
            )
    return buf.getvalue()


def render_report(report: ComparisonReport, fmt="markdown") -> bytes:
    """Serialize a report as ``markdown``, ``csv`` or ``json`` (UTF-8 bytes).

    The output depends only on the report contents.
    """
    if fmt == "markdown":
        text = _render_markdown(report)
    elif fmt == "csv":
        text = _render_csv(report)
    elif fmt == "json":
        text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return text.encode("utf-8")


def report_from_json(data) -> ComparisonReport:
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    return ComparisonReport.from_dict(data)
