#!/usr/bin/env python3
"""
Discretized Functional Calculus of X and D

Functions of X act by pointwise multiplication on a uniform grid of
[-L, L); functions of D = -i d/dx act through the discrete Fourier transform
with periodic wrap. Wave operators are assembled as sums of factor chains and
checked against the composition identities W^{+#} W^- = 1 and W^- = W^+ S(X).
Also provides quadrature Hankel and sine transforms on the half line.
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Any, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import fft
from scipy.integrate import simpson

from levinson_config import get_config
from levinson_errors import DomainError, UnboundedOperatorError, ValidationError
from model_parameters import ModelParams, NuParams, Params, Sign, varsigma, wave_operator_bounds
from scattering_symbols import smatrix
from special_functions import EULER_GAMMA, BesselKind, bessel_dim1, xi_cross

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of N points on [-L, L)."""
    half_width: float = 40.0
    points: int = 2 ** 14

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValidationError(f"half_width must be > 0, got {self.half_width}")
        if self.points < 2 ** 10 or self.points & (self.points - 1):
            raise ValidationError(f"points must be a power of two >= 1024, got {self.points}")

    @classmethod
    def from_config(cls) -> "GridSpec":
        grid = get_config().grid
        return cls(half_width=float(grid["half_width"]), points=int(grid["points"]))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    @property
    def xi(self) -> np.ndarray:
        return 2.0 * np.pi * fft.fftfreq(self.points, d=self.spacing)

    def window(self, radius: Optional[float] = None) -> np.ndarray:
        radius = self.half_width / 2.0 if radius is None else radius
        return np.abs(self.x) <= radius

    def to_dict(self) -> Dict[str, Any]:
        return {"half_width": self.half_width, "points": self.points, "spacing": self.spacing}


@dataclass
class GridVector:
    """Samples of a function on a GridSpec."""
    samples: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (self.grid.points,):
            raise ValidationError(f"Expected {self.grid.points} samples, got shape {self.samples.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ValidationError("GridVector samples must be finite")

    def norm(self, mask: Optional[np.ndarray] = None) -> float:
        values = self.samples if mask is None else self.samples[mask]
        return float(np.sqrt(np.sum(np.abs(values) ** 2) * self.grid.spacing))

    def pairing(self, other: "GridVector") -> complex:
        """Bilinear (non-conjugated) pairing."""
        return complex(np.sum(self.samples * other.samples) * self.grid.spacing)

    def __add__(self, other: "GridVector") -> "GridVector":
        return GridVector(self.samples + other.samples, self.grid)

    def __sub__(self, other: "GridVector") -> "GridVector":
        return GridVector(self.samples - other.samples, self.grid)

    def scale(self, factor: complex) -> "GridVector":
        return GridVector(factor * self.samples, self.grid)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.grid.x, "re": self.samples.real, "im": self.samples.imag})


def gaussian_packet(g: GridSpec, center: float = 0.0, width: Optional[float] = None,
                    wavenumber: float = 0.0) -> GridVector:
    """exp(-(x - c)^2 / (2 w^2) + i k x)."""
    width = float(get_config().grid["test_width"]) if width is None else width
    x = g.x
    return GridVector(np.exp(-((x - center) ** 2) / (2.0 * width ** 2) + 1j * wavenumber * x), g)


# ---------------------------------------------------------------------------
# Factor chains
# ---------------------------------------------------------------------------

@dataclass
class Factor:
    """A multiplication operator: kind 'x' acts on samples, kind 'd' on Fourier coefficients."""
    kind: str
    values: np.ndarray

    def apply(self, samples: np.ndarray) -> np.ndarray:
        if self.kind == "x":
            return self.values * samples
        return fft.ifft(self.values * fft.fft(samples))

    def transpose(self) -> "Factor":
        if self.kind == "x":
            return self
        n = self.values.size
        # a(D) -> a(-D): frequency index k -> -k mod N
        return Factor("d", self.values[(-np.arange(n)) % n])


@dataclass
class FactorChain:
    """coefficient * F_1 F_2 ... F_k, applied right to left."""
    factors: List[Factor] = field(default_factory=list)
    coefficient: complex = 1.0

    def apply(self, samples: np.ndarray) -> np.ndarray:
        out = np.asarray(samples, dtype=complex)
        for factor in reversed(self.factors):
            out = factor.apply(out)
        return self.coefficient * out

    def transpose(self) -> "FactorChain":
        return FactorChain([f.transpose() for f in reversed(self.factors)], self.coefficient)


@dataclass
class GridOperator:
    """Sum of factor chains on one grid."""
    grid: GridSpec
    chains: List[FactorChain] = field(default_factory=list)

    def __call__(self, v: GridVector) -> GridVector:
        if v.grid != self.grid:
            raise ValidationError("Vector and operator live on different grids")
        total = np.zeros(self.grid.points, dtype=complex)
        for chain in self.chains:
            total = total + chain.apply(v.samples)
        return GridVector(total, self.grid)

    def transpose(self) -> "GridOperator":
        return GridOperator(self.grid, [c.transpose() for c in self.chains])


def multiplier_x(values: np.ndarray) -> Factor:
    return Factor("x", np.asarray(values, dtype=complex))


def multiplier_d(g: GridSpec, symbol: Callable[[np.ndarray], np.ndarray]) -> Factor:
    return Factor("d", np.asarray(symbol(g.xi), dtype=complex))


def fourier_multiplier(v: GridVector, symbol: Callable[[np.ndarray], np.ndarray]) -> GridVector:
    """a(D) v."""
    return GridVector(multiplier_d(v.grid, symbol).apply(v.samples), v.grid)


# ---------------------------------------------------------------------------
# Wave operators
# ---------------------------------------------------------------------------

def _require_bounded(p: Params, sign: Sign) -> None:
    if not wave_operator_bounds(p)[sign.value]:
        raise UnboundedOperatorError(
            f"W^{sign.value} is unbounded for {p.to_dict()}: exceptional parameters"
        )


def _model_multipliers(p: ModelParams, sign: Sign, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """B(x) = P / (1 - t c) and C(x) = t B(x), t = varsigma e^{2mx}."""
    e = sign.unit
    phase = cmath.exp(e * 1j * np.pi * (p.m - 0.5) / 2.0)
    s = varsigma(p)
    if s == 0:
        return np.full(x.shape, phase, dtype=complex), np.zeros(x.shape, dtype=complex)
    c = cmath.exp(e * 1j * np.pi * p.m)
    v = cmath.log(s) + 2.0 * p.m * x
    small = v.real <= 0
    b = np.empty(x.shape, dtype=complex)
    cc = np.empty(x.shape, dtype=complex)
    t = np.exp(v[small])
    b[small] = phase / (1.0 - t * c)
    cc[small] = phase * t / (1.0 - t * c)
    ti = np.exp(-v[~small])
    b[~small] = phase * ti / (ti - c)
    cc[~small] = phase / (ti - c)
    return b, cc


def wave_operator(p: ModelParams, sign: Any, g: GridSpec) -> GridOperator:
    """W = Xi_{1/2}(-D) Xi_m(D) B(X) - Xi_{1/2}(-D) Xi_{-m}(D) C(X)."""
    sign = Sign.parse(sign)
    _require_bounded(p, sign)
    b, c = _model_multipliers(p, sign, g.x)
    lead = FactorChain([multiplier_d(g, lambda xi: xi_cross(0.5, p.m, xi)), multiplier_x(b)])
    chains = [lead]
    if np.any(c != 0):
        chains.append(FactorChain(
            [multiplier_d(g, lambda xi: xi_cross(0.5, -p.m, xi)), multiplier_x(c)],
            coefficient=-1.0,
        ))
    return GridOperator(g, chains)


def wave_operator_nu(p: NuParams, sign: Any, g: GridSpec) -> GridOperator:
    """W = Xi_{1/2}(-D) Xi_0(D) [ (gamma + X - nu) - i pi/2 tanh(pi D / 2) ] q(X)."""
    sign = Sign.parse(sign)
    _require_bounded(p, sign)
    e = sign.unit
    d = EULER_GAMMA + g.x - p.nu
    q = cmath.exp(-e * 1j * np.pi / 4.0) / (d + e * 0.5j * np.pi)
    cross = multiplier_d(g, lambda xi: xi_cross(0.5, 0.0, xi))
    affine = FactorChain([cross, multiplier_x(d * q)])
    damped = FactorChain(
        [cross, multiplier_d(g, lambda xi: np.tanh(0.5 * np.pi * xi)), multiplier_x(q)],
        coefficient=-0.5j * np.pi,
    )
    return GridOperator(g, [affine, damped])


def _operator(p: Params, sign: Any, g: GridSpec) -> GridOperator:
    if isinstance(p, NuParams):
        return wave_operator_nu(p, sign, g)
    return wave_operator(p, sign, g)


def apply_wave_operator(p: ModelParams, sign: Any, v: GridVector, g: Optional[GridSpec] = None) -> GridVector:
    """W^{sign}_{m,kappa} v."""
    return wave_operator(p, sign, g or v.grid)(v)


def apply_wave_operator_nu(p: NuParams, sign: Any, v: GridVector, g: Optional[GridSpec] = None) -> GridVector:
    """W^{nu, sign}_0 v."""
    return wave_operator_nu(p, sign, g or v.grid)(v)


# ---------------------------------------------------------------------------
# Composition checks
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    """Worst relative residual over the test vectors."""
    check: str
    params: Dict[str, Any]
    grid: Dict[str, Any]
    trials: int
    residuals: List[float] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "params": self.params,
            "grid": self.grid,
            "trials": self.trials,
            "residuals": self.residuals,
            "max_residual": self.max_residual,
        }


def trial_vectors(g: GridSpec, trials: int, seed: Optional[int] = None) -> List[GridVector]:
    """Centred Gaussian first, then randomly shifted and modulated packets."""
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    vectors = [gaussian_packet(g)]
    for _ in range(max(0, trials - 1)):
        vectors.append(gaussian_packet(g, center=rng.uniform(-1.0, 1.0),
                                       wavenumber=rng.uniform(-2.0, 2.0)))
    return vectors[:max(trials, 0)]


def _relative(diff: GridVector, v: GridVector, mask: np.ndarray) -> float:
    base = v.norm(mask)
    return diff.norm(mask) / base if base > 0 else diff.norm(mask)


def transpose_compose_check(p: Params, g: Optional[GridSpec] = None, trials: int = 3,
                            seed: Optional[int] = None) -> ResidualReport:
    """max ||(W^{+#} W^- - 1) v|| / ||v|| over |x| <= L/2."""
    g = g or GridSpec.from_config()
    w_minus = _operator(p, Sign.MINUS, g)
    w_plus_t = _operator(p, Sign.PLUS, g).transpose()
    mask = g.window()
    report = ResidualReport("transpose_compose", p.to_dict(), g.to_dict(), trials)
    for v in trial_vectors(g, trials, seed):
        report.residuals.append(_relative(w_plus_t(w_minus(v)) - v, v, mask))
    logger.info("W^{+#}W^- - 1 residual %.3e on %s", report.max_residual, g.to_dict())
    return report


def scattering_operator_check(p: ModelParams, g: Optional[GridSpec] = None, trials: int = 3,
                              seed: Optional[int] = None) -> ResidualReport:
    """max ||(W^- - W^+ S(X)) v|| / ||v|| over |x| <= L/2."""
    g = g or GridSpec.from_config()
    w_minus = _operator(p, Sign.MINUS, g)
    w_plus = _operator(p, Sign.PLUS, g)
    s_values = np.asarray(smatrix(p)(g.x), dtype=complex)
    mask = g.window()
    report = ResidualReport("scattering_operator", p.to_dict(), g.to_dict(), trials)
    for v in trial_vectors(g, trials, seed):
        rotated = GridVector(s_values * v.samples, g)
        report.residuals.append(_relative(w_minus(v) - w_plus(rotated), v, mask))
    return report


# ---------------------------------------------------------------------------
# Half-line transforms
# ---------------------------------------------------------------------------

def hankel_transform(m: complex, f_values: Sequence[complex], s_grid: Sequence[float],
                     r_out: Sequence[float]) -> np.ndarray:
    """(F_m f)(r) = sqrt(2/pi) int J_m(rs) f(s) ds by Simpson's rule (dimension-1 J)."""
    m = complex(m)
    if m.real <= -1.0:
        raise DomainError(f"Hankel transform needs Re(m) > -1, got m = {m}")
    s = np.asarray(s_grid, dtype=float)
    r = np.asarray(r_out, dtype=float)
    f = np.asarray(f_values, dtype=complex)
    if f.shape != s.shape:
        raise ValidationError("f_values and s_grid must have the same length")
    if np.any(s < 0) or np.any(r < 0):
        raise DomainError("Hankel transform lives on the half line")
    kernel = np.asarray(bessel_dim1(BesselKind.J, m, np.outer(r, s)), dtype=complex)
    return np.sqrt(2.0 / np.pi) * simpson(kernel * f[np.newaxis, :], x=s, axis=1)


def sine_transform(f_values: Sequence[complex], s_grid: Sequence[float],
                   r_out: Sequence[float]) -> np.ndarray:
    """(F_D f)(r) = sqrt(2/pi) int sin(rs) f(s) ds by Simpson's rule."""
    s = np.asarray(s_grid, dtype=float)
    r = np.asarray(r_out, dtype=float)
    f = np.asarray(f_values, dtype=complex)
    if f.shape != s.shape:
        raise ValidationError("f_values and s_grid must have the same length")
    return np.sqrt(2.0 / np.pi) * simpson(np.sin(np.outer(r, s)) * f[np.newaxis, :], x=s, axis=1)
