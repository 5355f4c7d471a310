"""
No-reference scores of an over-reddened image
=============================================

Push half of a neutral image to full red. The distortion is obvious to a
viewer, yet the colourfulness terms of the no-reference measures reward it.
"""

import numpy as np
from scipy import ndimage

from uwiqa import ImageBuffer, ccf, uciqe, uiqm

rng = np.random.default_rng(0)

############################################################
# A neutral textured image and its red-shifted copy

texture = ndimage.gaussian_filter(rng.uniform(0, 255, (192, 256)), 2.0) * 2.0 - 128
texture = np.clip(texture, 0, 255).round().astype(np.uint8)
neutral = ImageBuffer(np.repeat(texture[:, :, None], 3, axis=2))

shifted = neutral.data.copy()
shifted[:, :128, 0] = 255
shifted = ImageBuffer(shifted)

############################################################
# Scores and the attribute terms behind them

for name, img in (("neutral", neutral), ("red-shifted", shifted)):
    u, q, c = uciqe(img), uiqm(img), ccf(img)
    print(f"{name:>12}: UCIQE {u.value:.3f} (sigma_c {u.sigma_c:.3f}, mu_s {u.mu_s:.3f})")
    print(f"{'':>12}  UIQM  {q.value:.3f} (uicm {q.uicm:.2f}, uism {q.uism:.2f}, uiconm {q.uiconm:.3f})")
    print(f"{'':>12}  CCF   {c.value:.3f} (colorfulness {c.colorfulness:.3f}, contrast {c.contrast:.2f})")
