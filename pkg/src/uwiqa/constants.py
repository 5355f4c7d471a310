"""Weights and constants of the no-reference measures, in one versioned record.

Defaults come from the papers that define each measure: UCIQE (Yang &
Sowmya 2015), UIQM (Panetta et al. 2016) and CCF (Wang et al. 2018). Block
size, guards and the CCF component definitions are implementation choices.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class MeasureConstants:
    version: str = "1"
    uciqe_weights: tuple = (0.4680, 0.2745, 0.2576)
    # chroma is divided by this before its std-dev so the three UCIQE terms share a scale
    uciqe_chroma_scale: float = 100.0
    # "lab" ranks Lab L in [0, 100]; "luma" ranks 8-bit luma scaled to [0, 1]
    uciqe_luminance: str = "lab"
    uciqe_extreme_fraction: float = 0.01
    uiqm_weights: tuple = (0.0282, 0.2953, 3.5753)
    uicm_coeffs: tuple = (-0.0268, 0.1586)
    uicm_alpha: float = 0.1
    block_size: int = 8
    uiconm_plip: bool = False
    plip_gamma: float = 1026.0
    ccf_weights: tuple = (0.17593, 0.61759, 0.33988)
    # Sobel magnitude threshold (8-bit scale) for visible edges, shared by CCF and edge count
    edge_threshold: float = 25.0

    def __post_init__(self):
        for name in ("uciqe_weights", "uiqm_weights", "ccf_weights"):
            value = tuple(float(w) for w in getattr(self, name))
            if len(value) != 3:
                raise ValueError(f"{name} needs three weights")
            object.__setattr__(self, name, value)
        coeffs = tuple(float(c) for c in self.uicm_coeffs)
        if len(coeffs) != 2:
            raise ValueError("uicm_coeffs needs two coefficients")
        object.__setattr__(self, "uicm_coeffs", coeffs)
        if not 0.0 <= self.uicm_alpha < 0.5:
            raise ValueError("uicm_alpha must lie in [0, 0.5)")
        if int(self.block_size) < 1:
            raise ValueError("block_size must be positive")
        object.__setattr__(self, "block_size", int(self.block_size))
        if self.uciqe_luminance not in ("lab", "luma"):
            raise ValueError("uciqe_luminance must be 'lab' or 'luma'")

    @classmethod
    def from_mapping(cls, mapping) -> "MeasureConstants":
        """Build from a config table, rejecting unknown keys."""
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(mapping) - names
        if unknown:
            raise ValueError(f"unknown constants: {', '.join(sorted(unknown))}")
        return cls(**mapping)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


DEFAULT_CONSTANTS = MeasureConstants()
