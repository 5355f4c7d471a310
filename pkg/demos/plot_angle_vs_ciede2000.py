"""
Angular error versus CIEDE2000 on gray patches
==============================================

The angular reproduction error only looks at the direction of an RGB
vector, so a gray patch keeps a zero angle however light or dark it is
rendered. CIEDE2000 compares full Lab colours and sees the change.
"""

import numpy as np

from uwiqa import delta_e00, reproduction_angular_error, srgb_to_lab

############################################################
# A mid-gray reference patch, rendered at several lightness levels

reference = np.array([122, 122, 122], dtype=np.uint8)
renderings = [(v, v, v) for v in (40, 90, 122, 160, 220, 255)]

print(f"{'rendered':>16} {'phi':>6} {'dE00':>7}")
for rgb in renderings:
    phi = reproduction_angular_error(np.array(rgb, dtype=np.uint8))
    de = delta_e00(srgb_to_lab(reference), srgb_to_lab(np.array(rgb, dtype=np.uint8)))
    print(f"{str(rgb):>16} {phi:6.2f} {de:7.2f}")

############################################################
# A slight colour cast, on the other hand, moves the angle.
# Scaling the cast patch leaves the angle where it was.

cast = np.array([0.45, 0.50, 0.55])
for scale in (0.5, 1.0, 1.8):
    print(f"scale {scale:3.1f}: phi = {reproduction_angular_error(scale * cast):.4f} deg")
