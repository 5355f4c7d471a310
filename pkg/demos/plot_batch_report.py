"""
Comparison table for a folder of scenes
=======================================

Lay out two scenes with an original and three "methods" each, evaluate
them, and print the Markdown table. The same report can be written from
the shell with ``uwiqa evaluate --root <dir>``.
"""

import tempfile
from pathlib import Path

import numpy as np
from scipy import ndimage

from uwiqa import ImageBuffer, discover_layout, evaluate_batch, render_report, save_png

rng = np.random.default_rng(1)

############################################################
# Each method applies a different per-channel gain to the original

gains = {"brighter": (1.2, 1.2, 1.2), "warmer": (1.4, 1.0, 0.8), "flatter": (0.8, 0.8, 0.8)}

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    for scene in ("reef", "wreck"):
        folder = root / scene
        folder.mkdir()
        base = ndimage.gaussian_filter(rng.uniform(0, 255, (96, 128, 3)), (2, 2, 0)) * 1.5 - 40
        base *= [0.5, 0.9, 1.0]  # blue-green cast
        save_png(ImageBuffer(np.clip(base, 0, 255).round().astype(np.uint8)), folder / "original.png")
        for name, gain in gains.items():
            out = np.clip(base * gain, 0, 255).round().astype(np.uint8)
            save_png(ImageBuffer(out), folder / f"{name}.png")

    ############################################################
    # Evaluate and render; bold is the best method, the dagger marks
    # a value worse than the original

    report = evaluate_batch(discover_layout(root), measures=["uciqe", "uiqm", "ccf", "psnr"])
    print(render_report(report, "markdown").decode())
