"""Evaluation settings, loadable from TOML or JSON.

Example TOML::

    [constants]
    uiqm_weights = [0.0282, 0.2953, 3.5753]
    edge_threshold = 25.0

    [ssim]
    window = 11
    sigma = 1.5

    [checker]
    phi_mode = "mean"        # or "per_pixel"
    phi_all_patches = false
    erosion = 2.0
    statistic = "mean"       # or "median"

    [ciede2000]
    kL = 1.0

    [preprocess]
    quarter = false
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .color_accuracy import Ciede2000Params
from .constants import MeasureConstants
from .generic import SsimParams


@dataclass(frozen=True)
class CheckerSettings:
    phi_mode: str = "mean"
    phi_all_patches: bool = False
    erosion: float = 2.0
    statistic: str = "mean"

    def __post_init__(self):
        if self.phi_mode not in ("mean", "per_pixel"):
            raise ValueError(f"unknown phi_mode {self.phi_mode!r}")
        if self.statistic not in ("mean", "median"):
            raise ValueError(f"unknown patch statistic {self.statistic!r}")
        if self.erosion < 0:
            raise ValueError("erosion must be non-negative")


@dataclass(frozen=True)
class EvalConfig:
    constants: MeasureConstants = field(default_factory=MeasureConstants)
    ssim: SsimParams = field(default_factory=SsimParams)
    ciede2000: Ciede2000Params = field(default_factory=Ciede2000Params)
    checker: CheckerSettings = field(default_factory=CheckerSettings)
    preprocess_quarter: bool = False

    @classmethod
    def from_mapping(cls, mapping) -> "EvalConfig":
        known = {"constants", "ssim", "ciede2000", "checker", "preprocess"}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown config sections: {', '.join(sorted(unknown))}")
        preprocess = dict(mapping.get("preprocess", {}))
        quarter = bool(preprocess.pop("quarter", False))
        if preprocess:
            raise ValueError(f"unknown preprocess keys: {', '.join(sorted(preprocess))}")
        return cls(
            constants=MeasureConstants.from_mapping(mapping.get("constants", {})),
            ssim=SsimParams(**mapping.get("ssim", {})),
            ciede2000=Ciede2000Params(**mapping.get("ciede2000", {})),
            checker=CheckerSettings(**mapping.get("checker", {})),
            preprocess_quarter=quarter,
        )

    def to_dict(self) -> dict:
        return {
            "constants": self.constants.to_dict(),
            "ssim": dataclasses.asdict(self.ssim),
            "ciede2000": dataclasses.asdict(self.ciede2000),
            "checker": dataclasses.asdict(self.checker),
            "preprocess": {"quarter": self.preprocess_quarter},
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path=None) -> EvalConfig:
    """Read a ``.toml`` or ``.json`` config file; ``None`` gives the defaults."""
    if path is None:
        return EvalConfig()
    path = Path(path)
    if path.suffix.lower() == ".toml":
        with open(path, "rb") as fh:
            mapping = tomllib.load(fh)
    elif path.suffix.lower() == ".json":
        mapping = json.loads(path.read_text())
    else:
        raise ValueError(f"{path}: config must be .toml or .json")
    return EvalConfig.from_mapping(mapping)
