#!/usr/bin/env python3
"""
Point Spectrum of H_{m,kappa} and H_0^nu

Eigenvalues are -4 exp(-w) over the branches w = (ln varsigma + 2 pi i z)/m
with -pi < Im w < pi, and -4 exp(2(nu - gamma)) for H_0^nu when
|Im nu| < pi/2. Includes the eigenvalue-count bounds for fixed m and the
accumulation sequences whose eigenvalues approach a point of [0, inf) that is
never itself an eigenvalue.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Any, Optional, Tuple, Union

import numpy as np

from levinson_config import get_config
from levinson_errors import ConvergenceError, ValidationError
from model_parameters import (
    BranchGeometry,
    ModelParams,
    NuParams,
    Params,
    gamma,
    to_pair,
)
from special_functions import EULER_GAMMA

logger = logging.getLogger(__name__)

# exp() stays finite for |Re w| below this
_MAX_EXPONENT = 700.0


class CountKind(Enum):
    """Size of the point spectrum."""
    EMPTY = "empty"
    FINITE = "finite"
    INFINITE = "infinite"


@dataclass
class SpectralData:
    """Eigenvalues (descending modulus) with their branch indices."""
    eigenvalues: List[complex] = field(default_factory=list)
    branch_indices: List[int] = field(default_factory=list)
    count_kind: CountKind = CountKind.EMPTY
    total_count: Optional[int] = 0
    truncated: bool = False
    on_boundary: bool = False

    @property
    def count(self) -> Union[int, str]:
        """Full (unwindowed) eigenvalue count, or 'infinite'."""
        if self.count_kind is CountKind.INFINITE:
            return "infinite"
        return int(self.total_count or 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [to_pair(lam) for lam in self.eigenvalues],
            "branch_indices": list(self.branch_indices),
            "count_kind": self.count_kind.value,
            "count": self.count,
            "truncated": self.truncated,
            "on_boundary": self.on_boundary,
        }


def _in_window(value: float, window: Tuple[float, float]) -> bool:
    return window[0] <= value <= window[1]


def _finalize(pairs: List[Tuple[complex, int]], data: SpectralData) -> SpectralData:
    pairs.sort(key=lambda item: (-abs(item[0]), item[1]))
    data.eigenvalues = [lam for lam, _ in pairs]
    data.branch_indices = [z for _, z in pairs]
    return data


def eigenvalues(p: ModelParams,
                modulus_window: Optional[Tuple[float, float]] = None) -> SpectralData:
    """Eigenvalues of H_{m,kappa} with |lambda| inside the window."""
    cfg = get_config()
    window = modulus_window if modulus_window is not None else cfg.window("eigenvalue_modulus")
    tol = cfg.tol("boundary")
    max_branch = int(cfg.windows["max_branch"])
    data = SpectralData()
    if p.kappa == 0:
        return data

    geo = BranchGeometry.of(p)
    pairs: List[Tuple[complex, int]] = []

    if geo.periodic:
        level = geo.constant_imag()
        if abs(abs(level) - np.pi) <= tol * np.pi:
            logger.warning("Im w = %.12g sits on the boundary +-pi: exceptional, no eigenvalues", level)
            data.on_boundary = True
            return data
        if abs(level) > np.pi:
            return data
        data.count_kind = CountKind.INFINITE
        data.total_count = None
        # |lambda| = 4 exp(-Re w_z), Re w_z = (b + 2 pi z) / m_i
        re_lo = math.log(4.0 / window[1]) if math.isfinite(window[1]) else -_MAX_EXPONENT
        re_hi = math.log(4.0 / window[0]) if window[0] > 0 else _MAX_EXPONENT
        re_lo, re_hi = max(re_lo, -_MAX_EXPONENT), min(re_hi, _MAX_EXPONENT)
        data.truncated = not (math.isfinite(window[1]) and window[0] > 0)
        b, m_i = geo.log_varsigma.imag, geo.m.imag
        ends = sorted(((re_lo * m_i - b) / (2 * np.pi), (re_hi * m_i - b) / (2 * np.pi)))
        z_lo = max(math.ceil(ends[0] - 1e-12), -max_branch)
        z_hi = min(math.floor(ends[1] + 1e-12), max_branch)
        if z_lo != math.ceil(ends[0] - 1e-12) or z_hi != math.floor(ends[1] + 1e-12):
            data.truncated = True
        for z in range(z_lo, z_hi + 1):
            lam = -4.0 * cmath.exp(-complex(geo.w(z)))
            if _in_window(abs(lam), window):
                pairs.append((lam, z))
        return _finalize(pairs, data)

    lo, hi = sorted((geo.branch_position(-np.pi), geo.branch_position(np.pi)))
    z_lo, z_hi = math.ceil(lo), math.floor(hi)
    if z_hi - z_lo > 2 * max_branch:
        logger.warning("Branch range [%d, %d] exceeds the cap; truncating", z_lo, z_hi)
        z_lo, z_hi = max(z_lo, -max_branch), min(z_hi, max_branch)
        data.truncated = True

    total = 0
    for z in range(z_lo, z_hi + 1):
        w = complex(geo.w(z))
        if abs(abs(w.imag) - np.pi) <= tol * np.pi:
            logger.warning("Branch z=%d has Im w on the boundary +-pi: exceptional, skipped", z)
            data.on_boundary = True
            continue
        if not (-np.pi < w.imag < np.pi):
            continue
        total += 1
        lam = -4.0 * cmath.exp(-w)
        if _in_window(abs(lam), window):
            pairs.append((lam, z))

    data.total_count = total
    data.count_kind = CountKind.FINITE if total else CountKind.EMPTY
    return _finalize(pairs, data)


def eigenvalue_nu(p: NuParams) -> Optional[complex]:
    """-4 exp(2(nu - gamma)) when -pi/2 < Im nu < pi/2, else None."""
    tol = get_config().tol("boundary")
    if abs(abs(p.nu.imag) - np.pi / 2) <= tol * np.pi:
        logger.warning("Im nu = %.12g is exceptional: no eigenvalue", p.nu.imag)
        return None
    if abs(p.nu.imag) >= np.pi / 2:
        return None
    return -4.0 * cmath.exp(2.0 * (p.nu - EULER_GAMMA))


def spectrum(p: Params, modulus_window: Optional[Tuple[float, float]] = None) -> SpectralData:
    """Point spectrum for either family."""
    if isinstance(p, ModelParams):
        return eigenvalues(p, modulus_window)
    lam = eigenvalue_nu(p)
    if lam is None:
        return SpectralData()
    data = SpectralData(count_kind=CountKind.FINITE, total_count=1)
    window = modulus_window if modulus_window is not None else (0.0, math.inf)
    if _in_window(abs(lam), window):
        data.eigenvalues, data.branch_indices = [lam], [0]
    return data


def eigenvalue_count(p: Params) -> Union[int, str]:
    """Number of eigenvalues, or 'infinite'."""
    return spectrum(p, (0.0, math.inf)).count


# ---------------------------------------------------------------------------
# Count bounds
# ---------------------------------------------------------------------------

@dataclass
class CountBound:
    """Bound on the number of eigenvalues for fixed (m, kappa)."""
    kind: str
    low: Optional[int] = None
    high: Optional[int] = None

    def contains(self, count: Union[int, str]) -> bool:
        if self.kind == "infinite":
            return count == "infinite"
        if self.kind in ("zero", "exceptional_boundary"):
            return count == 0
        return isinstance(count, int) and self.low <= count <= self.high

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "low": self.low, "high": self.high}


def count_bounds(p: ModelParams) -> CountBound:
    """infinite / zero / exceptional_boundary for Re m = 0, else {N, N+1}."""
    if p.kappa == 0:
        return CountBound("zero", 0, 0)
    if p.is_periodic:
        tol = get_config().tol("boundary")
        ratio = math.log(abs(p.kappa)) / p.m.imag
        if abs(abs(ratio) - np.pi) <= tol * np.pi:
            return CountBound("exceptional_boundary", 0, 0)
        if abs(ratio) < np.pi:
            return CountBound("infinite")
        return CountBound("zero", 0, 0)
    width = abs(p.m) ** 2 / abs(p.m.real)
    n = math.ceil(width - 1e-12) - 1
    return CountBound("range", n, n + 1)


# ---------------------------------------------------------------------------
# Accumulation sequences
# ---------------------------------------------------------------------------

@dataclass
class AccumulationRun:
    """Eigenvalues of a parameter sequence approaching target_energy > 0."""
    family: str
    target: float
    half_plane: str
    parameter_sequence: List[Params] = field(default_factory=list)
    eigenvalue_sequence: List[complex] = field(default_factory=list)

    @property
    def distances(self) -> List[float]:
        return [abs(lam - self.target) for lam in self.eigenvalue_sequence]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "target": self.target,
            "half_plane": self.half_plane,
            "parameters": [q.to_dict() for q in self.parameter_sequence],
            "eigenvalues": [to_pair(lam) for lam in self.eigenvalue_sequence],
            "distances": self.distances,
        }


def _half_plane_ok(lam: complex, half_plane: str) -> bool:
    return lam.imag > 0 if half_plane == "upper" else lam.imag < 0


def accumulation_sequence(target_energy: float, family: str = "H_mk", n_terms: int = 50,
                          half_plane: str = "upper", m: complex = 0.5) -> AccumulationRun:
    """
    Build parameters whose eigenvalue approaches target_energy from one half plane.

    H_mk (m fixed): w_n = a + i b_n with a = -ln(target/4), b_n = pi - 1/n for the
    upper half plane and -pi + 1/n for the lower one; varsigma_n = exp(m w_n).
    H_0nu: nu_n = a + i b_n with a = gamma + ln(target/4)/2, b_n = pi/2 - 1/n
    for the lower half plane and -pi/2 + 1/n for the upper one.
    Each eigenvalue is recomputed from the spectrum of the generated operator.
    """
    if target_energy <= 0:
        raise ValidationError("target_energy must be > 0")
    if half_plane not in ("upper", "lower"):
        raise ValidationError(f"half_plane must be 'upper' or 'lower', got {half_plane!r}")
    if n_terms < 1:
        raise ValidationError("n_terms must be >= 1")

    run = AccumulationRun(family=family, target=float(target_energy), half_plane=half_plane)
    window = (target_energy / 2.0, target_energy * 2.0)

    for n in range(1, n_terms + 1):
        if family == "H_mk":
            a_inf = -math.log(target_energy / 4.0)
            b_n = np.pi - 1.0 / n if half_plane == "upper" else -np.pi + 1.0 / n
            w_n = complex(a_inf, b_n)
            m_c = complex(m)
            kappa = cmath.exp(m_c * w_n) * complex(gamma(m_c)) / complex(gamma(-m_c))
            params: Params = ModelParams(m=m_c, kappa=kappa)
            predicted = -4.0 * cmath.exp(-w_n)
            candidates = eigenvalues(params, window).eigenvalues
        elif family == "H_0nu":
            a_inf = EULER_GAMMA + math.log(target_energy / 4.0) / 2.0
            b_n = np.pi / 2 - 1.0 / n if half_plane == "lower" else -np.pi / 2 + 1.0 / n
            params = NuParams(nu=complex(a_inf, b_n))
            predicted = -4.0 * cmath.exp(2.0 * (params.nu - EULER_GAMMA))
            lam_nu = eigenvalue_nu(params)
            candidates = [] if lam_nu is None else [lam_nu]
        else:
            raise ValidationError(f"Unknown family {family!r}; expected 'H_mk' or 'H_0nu'")

        if not candidates:
            raise ConvergenceError(f"Term {n}: generated operator has no eigenvalue near the target")
        lam = min(candidates, key=lambda c: abs(c - predicted))
        if abs(lam - predicted) > 1e-9 * target_energy:
            raise ConvergenceError(f"Term {n}: recomputed eigenvalue {lam} differs from {predicted}")
        if not _half_plane_ok(lam, half_plane):
            raise ConvergenceError(f"Term {n}: eigenvalue {lam} left the {half_plane} half plane")
        if any(abs(c - target_energy) <= 1e-12 * target_energy for c in candidates):
            raise ConvergenceError(f"Term {n}: the accumulation point appeared as an eigenvalue")

        run.parameter_sequence.append(params)
        run.eigenvalue_sequence.append(lam)

    distances = run.distances
    for i in range(1, len(distances) - 1):
        if distances[i + 1] >= distances[i]:
            raise ConvergenceError(f"Distance to the target stopped decreasing at term {i + 2}")
    logger.info("Accumulation run %s/%s: %d terms, final distance %.3e",
                family, half_plane, n_terms, distances[-1])
    return run
