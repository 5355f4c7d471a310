"""
Scoring a colour checker under a water cast
===========================================

Render the built-in 24-patch chart, tint it the way a blue-green water
column would, then score every patch with the checker protocol.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from uwiqa import evaluate_checker, load_reference, parse_annotations

reference = load_reference()

############################################################
# Draw the chart: 6 x 4 patches of 30 pixels with 6-pixel gaps

patch, gap = 30, 6
step = patch + gap
image = np.zeros((4 * step + gap, 6 * step + gap, 3))
shapes = []
for i, p in enumerate(reference.patches):
    row, col = divmod(i, 6)
    y0, x0 = gap + row * step, gap + col * step
    image[y0 : y0 + patch, x0 : x0 + patch] = p.srgb
    corners = [[x0, y0], [x0 + patch - 1, y0], [x0 + patch - 1, y0 + patch - 1], [x0, y0 + patch - 1]]
    shapes.append({"label": p.label, "points": corners, "shape_type": "polygon"})

############################################################
# Attenuate red strongly and add a little backscatter

underwater = np.clip(image * [0.45, 0.85, 0.95] + [0, 12, 20], 0, 255).round().astype(np.uint8)

############################################################
# Annotations are plain LabelMe JSON

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "chart.json"
    path.write_text(json.dumps({"shapes": shapes}))
    annotations = parse_annotations(path)

scores = evaluate_checker(underwater, annotations, reference)

############################################################
# The six achromatic patches carry both errors

print(f"{'patch':<12} {'phi':>6} {'dE00':>6}")
for s in scores:
    if s.achromatic:
        print(f"{s.label:<12} {s.phi_degrees:6.2f} {s.delta_e00:6.2f}")

worst = max(scores, key=lambda s: s.delta_e00)
print(f"largest colour difference: {worst.label} ({worst.delta_e00:.1f})")
