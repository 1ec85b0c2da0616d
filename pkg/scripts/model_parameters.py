#!/usr/bin/env python3
"""
Model Parameters and Exceptional Classification

Parameter records for the two operator families

    H_{m,kappa}  with |Re m| < 1, m != 0, kappa finite
    H_0^nu       with nu finite

together with the derived coupling varsigma = kappa Gamma(-m) / Gamma(m),
the self-adjoint / exceptional classification, and the singularity sets
Omega^{+-} (momenta k > 0) and Lambda^{+-} (positions x = ln(k/2)).

Branches: for an integer z, w_z = (ln varsigma + 2 pi i z) / m with the
principal logarithm. A pair is exceptional for the sign s when some branch
has Im w_z = s * pi.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, List, Any, Optional, Sequence, Tuple, Union

import numpy as np

from levinson_config import get_config
from levinson_errors import ValidationError
from special_functions import EULER_GAMMA, gamma

logger = logging.getLogger(__name__)


def to_pair(z: complex) -> List[float]:
    """Serialize a complex scalar as [re, im]."""
    z = complex(z)
    return [float(z.real), float(z.imag)]


def from_pair(pair: Sequence[float]) -> complex:
    if len(pair) != 2:
        raise ValidationError(f"Expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


class Sign(Enum):
    """Sign label for the two boundary values k^2 +- i0 and their symbols."""
    PLUS = "+"
    MINUS = "-"

    @property
    def unit(self) -> int:
        return 1 if self is Sign.PLUS else -1

    @property
    def opposite(self) -> "Sign":
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    @classmethod
    def parse(cls, value: Any) -> "Sign":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        if text in ("+", "plus", "p", "+1", "1"):
            return cls.PLUS
        if text in ("-", "minus", "m", "-1"):
            return cls.MINUS
        raise ValidationError(f"Unknown sign: {value!r}")


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Coupling data (m, kappa) of H_{m,kappa}."""
    m: complex
    kappa: complex

    def __post_init__(self):
        m = complex(self.m)
        kappa = complex(self.kappa)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "kappa", kappa)
        if not (cmath.isfinite(m)):
            raise ValidationError(f"m must be finite, got {m}")
        if not cmath.isfinite(kappa):
            raise ValidationError(
                "kappa must be finite: the case kappa = infinity is disregarded (it is H_{-m,0})"
            )
        if m == 0:
            raise ValidationError(
                "m = 0 is not a ModelParams family member: H_{0,kappa} does not depend on kappa, use NuParams"
            )
        if abs(m.real) >= 1.0:
            raise ValidationError(f"|Re(m)| must be < 1, got m = {m}")

    @property
    def is_periodic(self) -> bool:
        """True when Re m = 0 (the periodic algebra)."""
        return abs(self.m.real) <= 1e-14 * abs(self.m)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": "H_mk", "m": to_pair(self.m), "kappa": to_pair(self.kappa)}


@dataclass(frozen=True)
class NuParams:
    """Boundary parameter nu of H_0^nu."""
    nu: complex

    def __post_init__(self):
        nu = complex(self.nu)
        object.__setattr__(self, "nu", nu)
        if not cmath.isfinite(nu):
            raise ValidationError(f"nu must be finite, got {nu}")

    def to_dict(self) -> Dict[str, Any]:
        return {"family": "H_0nu", "nu": to_pair(self.nu)}


Params = Union[ModelParams, NuParams]


def varsigma(p: ModelParams) -> complex:
    """varsigma = kappa Gamma(-m) / Gamma(m); zero when kappa = 0."""
    if p.kappa == 0:
        return 0j
    return p.kappa * complex(gamma(-p.m)) / complex(gamma(p.m))


# ---------------------------------------------------------------------------
# Branch geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchGeometry:
    """ln varsigma = a + i b and m = m_r + i m_i, with |m|^2 = M."""
    m: complex
    log_varsigma: complex

    @classmethod
    def of(cls, p: ModelParams) -> "BranchGeometry":
        s = varsigma(p)
        if s == 0:
            raise ValidationError("Branch geometry needs kappa != 0")
        return cls(m=p.m, log_varsigma=cmath.log(s))

    @property
    def modulus_sq(self) -> float:
        return abs(self.m) ** 2

    @property
    def periodic(self) -> bool:
        return abs(self.m.real) <= 1e-14 * abs(self.m)

    def w(self, z: Union[int, np.ndarray]) -> Union[complex, np.ndarray]:
        return (self.log_varsigma + 2j * np.pi * np.asarray(z)) / self.m

    def branch_position(self, alpha: float) -> float:
        """Real z at which Im w_z = alpha (Re m != 0)."""
        a, b = self.log_varsigma.real, self.log_varsigma.imag
        m_r, m_i = self.m.real, self.m.imag
        return ((alpha * self.modulus_sq + a * m_i) / m_r - b) / (2.0 * np.pi)

    def constant_imag(self) -> float:
        """Im w_z, independent of z when Re m = 0."""
        return -self.log_varsigma.real / self.m.imag


def _nearest_integer(value: float, tol: float) -> Optional[int]:
    nearest = round(value)
    if abs(value - nearest) <= tol * max(1.0, abs(value)):
        return int(nearest)
    return None


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    """Self-adjoint / exceptional verdict with branch witnesses per sign."""
    family: str
    self_adjoint: bool
    exceptional_plus: bool
    exceptional_minus: bool
    witnesses: Dict[str, List[int]] = field(default_factory=lambda: {"+": [], "-": []})
    periodic_family: bool = False

    @property
    def exceptional(self) -> bool:
        return self.exceptional_plus or self.exceptional_minus

    def is_exceptional(self, sign: Sign) -> bool:
        return self.exceptional_plus if sign is Sign.PLUS else self.exceptional_minus

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["exceptional"] = self.exceptional
        return data


def is_self_adjoint(p: Params) -> bool:
    """m real with kappa real, m imaginary with |kappa| = 1, or nu real."""
    tol = get_config().tol("self_adjoint")
    if isinstance(p, NuParams):
        return abs(p.nu.imag) <= tol
    if abs(p.m.imag) <= tol and abs(p.kappa.imag) <= tol:
        return True
    return p.is_periodic and abs(abs(p.kappa) - 1.0) <= tol


def classify(p: Params) -> Classification:
    """Classify parameters as self-adjoint and/or exceptional for each sign."""
    tol = get_config().tol("branch_integer")
    self_adjoint = is_self_adjoint(p)

    if isinstance(p, NuParams):
        plus = abs(p.nu.imag - np.pi / 2) <= tol * np.pi
        minus = abs(p.nu.imag + np.pi / 2) <= tol * np.pi
        return Classification("H_0nu", self_adjoint, plus, minus)

    if p.kappa == 0:
        return Classification("H_mk", self_adjoint, False, False)

    geo = BranchGeometry.of(p)
    result = Classification("H_mk", self_adjoint, False, False)
    if geo.periodic:
        level = geo.constant_imag()
        result.exceptional_plus = abs(level - np.pi) <= tol * np.pi
        result.exceptional_minus = abs(level + np.pi) <= tol * np.pi
        result.periodic_family = result.exceptional
        return result

    for sign in Sign:
        z = _nearest_integer(geo.branch_position(sign.unit * np.pi), tol)
        if z is not None:
            result.witnesses[sign.value] = [z]
            if sign is Sign.PLUS:
                result.exceptional_plus = True
            else:
                result.exceptional_minus = True
    if result.exceptional_plus and result.exceptional_minus:
        logger.debug("Both-sign exceptional pair m=%s kappa=%s", p.m, p.kappa)
    return result


def wave_operator_bounds(p: Params) -> Dict[str, bool]:
    """Which wave operators W^{+-} are bounded."""
    c = classify(p)
    if isinstance(p, NuParams):
        return {"+": not c.exceptional_plus, "-": not c.exceptional_minus}
    # pi-exceptional breaks W^-, (-pi)-exceptional breaks W^+
    return {"+": not c.exceptional_minus, "-": not c.exceptional_plus}


# ---------------------------------------------------------------------------
# Singularity sets
# ---------------------------------------------------------------------------

@dataclass
class SingularitySet:
    """Spectral singularities k > 0 for one sign (a windowed view)."""
    sign: str
    momenta: List[float] = field(default_factory=list)
    branches: List[int] = field(default_factory=list)
    infinite: bool = False
    truncated: bool = False

    @property
    def energies(self) -> List[float]:
        return [k * k for k in self.momenta]

    @property
    def positions(self) -> List[float]:
        return [math.log(k / 2.0) for k in self.momenta]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": self.sign,
            "momenta": list(self.momenta),
            "energies": self.energies,
            "branches": list(self.branches),
            "infinite": self.infinite,
            "truncated": self.truncated,
        }


# keeps k = 2 exp(-Re w / 2) and k^2 finite and nonzero
_MAX_RE_W = 700.0


def _integer_range(lo: float, hi: float, cap: int) -> Tuple[range, bool]:
    """Integers in [lo, hi] clipped to |z| <= cap; open ends are clipped too."""
    bound = float(cap) + 1.0
    z_lo = math.ceil(max(lo, -bound) - 1e-12)
    z_hi = math.floor(min(hi, bound) + 1e-12)
    clipped_lo, clipped_hi = max(z_lo, -cap), min(z_hi, cap)
    return range(clipped_lo, clipped_hi + 1), (clipped_lo != z_lo or clipped_hi != z_hi)


def omega_set(p: ModelParams, sign: Any,
              k_window: Optional[Tuple[float, float]] = None) -> SingularitySet:
    """Momenta k with k^2 = 4 exp(-Re w_z) over branches with Im w_z = sign * pi."""
    sign = Sign.parse(sign)
    cfg = get_config()
    k_lo, k_hi = k_window if k_window is not None else cfg.window("singularity_momentum")
    result = SingularitySet(sign=sign.value)
    if p.kappa == 0:
        return result

    c = classify(p)
    if not c.is_exceptional(sign):
        return result

    geo = BranchGeometry.of(p)
    if c.periodic_family:
        result.infinite = True
        # Re w_z = (b + 2 pi z) / m_i must lie in [-2 ln(k_hi/2), -2 ln(k_lo/2)]
        re_lo = -2.0 * math.log(k_hi / 2.0) if math.isfinite(k_hi) else -_MAX_RE_W
        re_hi = -2.0 * math.log(k_lo / 2.0) if k_lo > 0 else _MAX_RE_W
        re_lo, re_hi = max(re_lo, -_MAX_RE_W), min(re_hi, _MAX_RE_W)
        b, m_i = geo.log_varsigma.imag, geo.m.imag
        ends = sorted(((re_lo * m_i - b) / (2 * np.pi), (re_hi * m_i - b) / (2 * np.pi)))
        branches, truncated = _integer_range(ends[0], ends[1], int(cfg.windows["max_branch"]))
        result.truncated = truncated or not (math.isfinite(k_hi) and k_lo > 0)
    else:
        branches = c.witnesses[sign.value]

    pairs = []
    for z in branches:
        k = 2.0 * math.exp(-complex(geo.w(z)).real / 2.0)
        if k_lo <= k <= k_hi:
            pairs.append((k, z))
    pairs.sort()
    result.momenta = [k for k, _ in pairs]
    result.branches = [z for _, z in pairs]
    return result


def omega_nu(p: NuParams) -> SingularitySet:
    """k = 2 exp(Re nu - gamma) when nu is exceptional, else empty."""
    c = classify(p)
    sign = Sign.PLUS if c.exceptional_plus else Sign.MINUS
    result = SingularitySet(sign=sign.value)
    if c.exceptional:
        result.momenta = [2.0 * math.exp(p.nu.real - EULER_GAMMA)]
        result.branches = [0]
    return result


def lambda_set(p: Params, sign: Any = None,
               x_window: Optional[Tuple[float, float]] = None) -> List[float]:
    """Position-space singular points x = ln(k/2), sorted."""
    if isinstance(p, NuParams):
        points = [p.nu.real - EULER_GAMMA] if classify(p).exceptional else []
    else:
        if sign is None:
            raise ValidationError("lambda_set for H_{m,kappa} needs a sign")
        if x_window is not None:
            x_lo, x_hi = max(x_window[0], -_MAX_RE_W / 2.0), min(x_window[1], _MAX_RE_W / 2.0)
            k_window = (2.0 * math.exp(x_lo) if math.isfinite(x_window[0]) else 0.0,
                        2.0 * math.exp(x_hi) if math.isfinite(x_window[1]) else math.inf)
        else:
            k_window = None
        omega = omega_set(p, sign, k_window)
        geo = BranchGeometry.of(p) if omega.branches else None
        points = [-complex(geo.w(z)).real / 2.0 for z in omega.branches]
    if x_window is not None:
        points = [x for x in points if x_window[0] <= x <= x_window[1]]
    return sorted(points)


# ---------------------------------------------------------------------------
# Parameter transformations
# ---------------------------------------------------------------------------

def mirror_params(p: ModelParams) -> ModelParams:
    """(m, kappa) -> (-m, 1/kappa); both describe the same operator."""
    if p.kappa == 0:
        raise ValidationError("The mirror of kappa = 0 is kappa = infinity, which is disregarded")
    return ModelParams(m=-p.m, kappa=1.0 / p.kappa)


def adjoint_params(p: Params) -> Params:
    """Parameters of the adjoint operator: complex conjugates."""
    if isinstance(p, NuParams):
        return NuParams(nu=p.nu.conjugate())
    return ModelParams(m=p.m.conjugate(), kappa=p.kappa.conjugate())


def exceptional_kappa(m: complex, sign: Any = "+", log_modulus: float = 0.0) -> complex:
    """
    Build kappa such that (m, kappa) is exceptional for the requested sign.

    sign is "+", "-" or "both". For Re m != 0, ln|varsigma| = log_modulus is
    free and arg(varsigma) is solved for; "both" needs (m_r^2 + m_i^2)/m_r to be
    an integer. For Re m = 0 the modulus is forced to |kappa| = e^{-s pi Im m}
    and arg(varsigma) = 0.
    """
    m = complex(m)
    ModelParams(m=m, kappa=1.0)
    m_r, m_i = m.real, m.imag
    both = str(sign).lower() == "both"
    target = Sign.PLUS if both else Sign.parse(sign)
    tol = get_config().tol("branch_integer")

    if abs(m_r) <= 1e-14 * abs(m):
        if both:
            raise ValidationError("Re(m) = 0 cannot be exceptional for both signs")
        log_varsigma = complex(-target.unit * np.pi * m_i, 0.0)
    else:
        ratio = abs(m) ** 2 / m_r
        if both and _nearest_integer(ratio, tol) is None:
            raise ValidationError(
                f"Both-sign exceptional pairs need (m_r^2+m_i^2)/m_r in Z, got {ratio:.12g}"
            )
        beta = (target.unit * np.pi * abs(m) ** 2 + log_modulus * m_i) / m_r
        phase = math.remainder(beta, 2.0 * np.pi)
        log_varsigma = complex(log_modulus, phase)

    s = cmath.exp(log_varsigma)
    return s * complex(gamma(m)) / complex(gamma(-m))
