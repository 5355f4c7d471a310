import json
from pathlib import Path

import numpy as np
import pytest
from scipy import ndimage

from uwiqa.image import ImageBuffer, round_half_away

DATA = Path(__file__).parent / "data"


def load_reference_pairs():
    rows = np.loadtxt(DATA / "ciede2000_reference_pairs.csv", delimiter=",", skiprows=2)
    return rows[:, 1:4], rows[:, 4:7], rows[:, 7]


def uniform(color, shape=(64, 64)):
    return ImageBuffer(np.broadcast_to(np.asarray(color, dtype=np.uint8), (*shape, 3)).copy())


def gaussian_blur(img, sigma):
    out = np.stack([ndimage.gaussian_filter(img.samples()[..., c], sigma) for c in range(3)], axis=-1)
    return ImageBuffer(np.clip(round_half_away(out), 0, 255).astype(np.uint8))


@pytest.fixture(scope="session")
def natural():
    """High-detail natural photograph, cropped to block-aligned 256x384."""
    from skimage import data

    return ImageBuffer(np.ascontiguousarray(data.astronaut()[:256, 64:448]))


@pytest.fixture(scope="session")
def underwater_like():
    """Blue-green cast, low-contrast version of a natural photo."""
    from skimage import data

    rgb = data.coffee()[:200, :296].astype(np.float64)
    cast = rgb * np.array([0.35, 0.8, 0.9]) + np.array([0, 30, 45])
    return ImageBuffer(np.clip(round_half_away(cast), 0, 255).astype(np.uint8))


def write_annotations(path, shapes):
    doc = {
        "version": "5.0.1",
        "shapes": [{"label": label, "points": pts, "shape_type": "polygon"} for label, pts in shapes],
        "imagePath": "img.png",
    }
    Path(path).write_text(json.dumps(doc))
    return path


def chart_image(reference, patch=16, gap=4, cols=6, transform=None):
    """Render ``reference`` as a grid of flat patches and return (image, shapes).

    ``transform`` maps a reference sRGB triple to the rendered one.
    """
    rows = -(-len(reference.patches) // cols)
    step = patch + gap
    data = np.zeros((rows * step + gap, cols * step + gap, 3), np.uint8)
    shapes = []
    for i, p in enumerate(reference.patches):
        r, c = divmod(i, cols)
        y0, x0 = gap + r * step, gap + c * step
        color = p.srgb if transform is None else transform(p.srgb)
        data[y0 : y0 + patch, x0 : x0 + patch] = np.asarray(color).round().astype(np.uint8)
        # polygon on the outermost pixel centres of the patch
        x1, y1 = x0 + patch - 1, y0 + patch - 1
        shapes.append((p.label, [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]))
    return ImageBuffer(data), shapes


def build_dataset(root, scenes=2, methods=("alpha", "beta"), size=(48, 64), chart=False, seed=0):
    """Write a scene-folder dataset of random textured images under ``root``."""
    from uwiqa.checker import load_reference
    from uwiqa.image import save_png

    rng = np.random.default_rng(seed)
    root = Path(root)
    for s in range(scenes):
        folder = root / f"scene{s:02d}"
        folder.mkdir(parents=True)
        if chart:
            base, shapes = chart_image(load_reference())
            write_annotations(folder / "annotations.json", shapes)
            base = base.data.astype(np.float64)
        else:
            base = ndimage.gaussian_filter(rng.uniform(0, 255, (*size, 3)), (1.5, 1.5, 0))
        save_png(ImageBuffer(np.clip(round_half_away(base), 0, 255).astype(np.uint8)), folder / "original.png")
        for k, m in enumerate(methods):
            gain = rng.uniform(0.7, 1.3, 3)
            out = np.clip(round_half_away(base * gain + k), 0, 255).astype(np.uint8)
            save_png(ImageBuffer(out), folder / f"{m}.png")
    return root


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
