#!/usr/bin/env python3
"""
Levinson Lab Configuration

Numerical tolerances, enumeration windows and grid defaults are read from
config/levinson_defaults.json. Missing files or keys fall back to the
built-in defaults below. Environment variables (optionally from a .env file)
override the runtime knobs:

    LEVLAB_CONFIG     alternate JSON path
    LEVLAB_THREADS    worker cap for parameter sweeps
    LEVLAB_SEED       default seed for randomized sweeps
    LEVLAB_LOG_LEVEL  logging level for the entry points
"""

import copy
import json
import logging
import math
import os
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from pathlib import Path
from typing import Dict, Any, Optional, Tuple

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "tolerances": {
        "pole": 1e-12,
        "branch_integer": 1e-9,
        "boundary": 1e-9,
        "self_adjoint": 1e-12,
        "singular_point": 1e-12,
        "spectral_singularity": 1e-10,
        "near_integer_order": 1e-6,
        "winding_rounding": 0.05,
    },
    "windows": {
        "max_branch": 1_000_000,
        "eigenvalue_modulus": [0.0, None],
        "singularity_momentum": [1e-3, 1e3],
        "symbol_truncation": 1e4,
    },
    "grid": {
        "half_width": 40.0,
        "points": 2 ** 14,
        "test_width": 2.0,
    },
    "winding": {
        "initial_samples": 2049,
        "modulus_floor": 1e-6,
        "max_phase_step": math.pi / 2,
        "max_refinements": 30,
    },
    "quadrature": {
        "epsabs": 1e-13,
        "epsrel": 1e-12,
        "limit": 400,
        "split": 50.0,
    },
}


@dataclass
class LevinsonConfig:
    """Resolved configuration for one process."""
    tolerances: Dict[str, float] = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["tolerances"]))
    windows: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["windows"]))
    grid: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["grid"]))
    winding: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["winding"]))
    quadrature: Dict[str, Any] = field(default_factory=lambda: copy.deepcopy(_DEFAULTS["quadrature"]))
    threads: int = 1
    seed: int = 0
    log_level: str = "INFO"
    source: str = "defaults"

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])

    def window(self, name: str) -> Tuple[float, float]:
        lo, hi = self.windows[name]
        return float(lo), (math.inf if hi is None else float(hi))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _merge(defaults: Dict[str, Dict[str, Any]], loaded: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
    """Overlay loaded sections key by key onto the defaults."""
    merged = copy.deepcopy(defaults)
    for section, values in loaded.items():
        if section not in merged:
            logger.warning("Ignoring unknown config section: %s", section)
            continue
        if isinstance(values, dict):
            merged[section].update(values)
    return merged


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Invalid %s=%r, using %d", name, raw, default)
        return default


def load_config(path: Optional[Path] = None) -> LevinsonConfig:
    """Load configuration from JSON plus environment overrides."""
    load_dotenv()
    base_path = Path(__file__).parent.parent
    env_path = os.getenv("LEVLAB_CONFIG")
    config_file = Path(path or env_path or base_path / "config" / "levinson_defaults.json")

    source = str(config_file)
    try:
        with open(config_file, "r", encoding="utf-8") as fh:
            sections = _merge(_DEFAULTS, json.load(fh))
    except (FileNotFoundError, json.JSONDecodeError) as e:
        logger.warning(f"Could not load config {config_file}: {e}, using defaults")
        sections = copy.deepcopy(_DEFAULTS)
        source = "defaults"

    return LevinsonConfig(
        tolerances=sections["tolerances"],
        windows=sections["windows"],
        grid=sections["grid"],
        winding=sections["winding"],
        quadrature=sections["quadrature"],
        threads=max(1, _env_int("LEVLAB_THREADS", 1)),
        seed=_env_int("LEVLAB_SEED", 0),
        log_level=os.getenv("LEVLAB_LOG_LEVEL", "INFO").upper(),
        source=source,
    )


@lru_cache(maxsize=1)
def get_config() -> LevinsonConfig:
    """Process-wide configuration, loaded once."""
    return load_config()


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging for an entry point."""
    logging.basicConfig(
        level=getattr(logging, (level or get_config().log_level).upper(), logging.INFO),
        format=LOG_FORMAT,
    )
