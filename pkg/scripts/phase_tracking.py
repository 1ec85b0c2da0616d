#!/usr/bin/env python3
"""
Adaptive Phase Tracking

Samples a complex-valued curve, bisects every interval whose phase step is
larger than max_phase_step (or whose modulus dips close to the floor), and
sums the unwrapped phase. Analytic endpoint limits can be attached so that a
truncated parameter range still closes onto the true corner values.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from levinson_config import get_config
from levinson_errors import NotFredholmError

logger = logging.getLogger(__name__)

CurveFunction = Callable[[np.ndarray], np.ndarray]


@dataclass
class PhaseTrace:
    """Samples of one curve and its total phase increment."""
    params: np.ndarray
    values: np.ndarray
    increment: float
    min_modulus: float
    refinements: int

    @property
    def samples_used(self) -> int:
        return int(self.params.size)


def stretched_grid(lo: float, hi: float, points: int,
                   center: float = 0.0, scale: float = 1.0) -> np.ndarray:
    """Grid dense near center, sinh-stretched out to the truncation points."""
    t = np.linspace(np.arcsinh((lo - center) / scale), np.arcsinh((hi - center) / scale), points)
    grid = center + scale * np.sinh(t)
    grid[0], grid[-1] = lo, hi
    return grid


def _flagged(values: np.ndarray, max_step: float, near_floor: float) -> np.ndarray:
    steps = np.abs(np.angle(values[1:] / values[:-1]))
    small = np.abs(values) < near_floor
    return (steps > max_step) | small[1:] | small[:-1]


def adaptive_trace(func: CurveFunction, lo: float, hi: float,
                   center: float = 0.0, scale: float = 1.0,
                   limit_lo: Optional[complex] = None, limit_hi: Optional[complex] = None,
                   label: str = "curve") -> PhaseTrace:
    """
    Track arg func(t) for t running from lo to hi.

    Raises NotFredholmError when |func| drops below the modulus floor or when
    a phase jump survives every refinement pass (a zero or pole on the path).
    """
    cfg = get_config().winding
    floor = float(cfg["modulus_floor"])
    max_step = float(cfg["max_phase_step"])

    params = stretched_grid(lo, hi, int(cfg["initial_samples"]), center, scale)
    values = np.asarray(func(params), dtype=complex)

    refinements = 0
    for refinements in range(1, int(cfg["max_refinements"]) + 1):
        if np.min(np.abs(values)) < floor:
            break
        bad = _flagged(values, max_step, 10.0 * floor)
        widths = np.diff(params)
        bad &= widths > 1e-14 * max(1.0, abs(center) + scale)
        if not np.any(bad):
            break
        idx = np.nonzero(bad)[0]
        mids = 0.5 * (params[idx] + params[idx + 1])
        new_values = np.asarray(func(mids), dtype=complex)
        params = np.insert(params, idx + 1, mids)
        values = np.insert(values, idx + 1, new_values)
    logger.debug("%s: %d samples after %d refinement passes", label, params.size, refinements)

    full = values
    if limit_lo is not None:
        full = np.concatenate(([complex(limit_lo)], full))
    if limit_hi is not None:
        full = np.concatenate((full, [complex(limit_hi)]))

    moduli = np.abs(full)
    min_modulus = float(np.min(moduli))
    if not np.all(np.isfinite(full)) or min_modulus < floor:
        raise NotFredholmError(
            f"{label}: symbol vanishes on the contour (min modulus {min_modulus:.3e}); winding undefined"
        )
    steps = np.abs(np.angle(full[1:] / full[:-1]))
    if np.max(steps) > max_step:
        raise NotFredholmError(
            f"{label}: unresolved phase jump of {np.max(steps):.3f} rad; the symbol vanishes or blows up on the contour"
        )

    phase = np.unwrap(np.angle(full))
    return PhaseTrace(
        params=params,
        values=values,
        increment=float(phase[-1] - phase[0]),
        min_modulus=min_modulus,
        refinements=refinements,
    )
