#!/usr/bin/env python3
"""
Scattering Symbols and Resolvent Kernels

The wave operators W^{-+} are functions of (X, D) with symbols

    Gamma^{-+}(x, xi) = Xi_{1/2}(-xi) (Xi_m(xi) - varsigma Xi_{-m}(xi) e^{2mx})
                        * e^{-+ i pi (m - 1/2) / 2} / (1 - varsigma e^{-+ i pi m} e^{2mx})

for H_{m,kappa}, and

    Gamma^{nu-+}(x, xi) = Xi_{1/2}(-xi) Xi_0(xi) (gamma + x - nu - i pi/2 tanh(pi xi / 2))
                          * e^{+- i pi / 4} / (gamma + x - nu -+ i pi / 2)

for H_0^nu. Their restrictions to the four sides of the compactified
(x, xi) square are the edge functions whose winding carries the index; the
xi = -inf side of the minus symbol is the scattering matrix S(x).
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Any, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from levinson_config import get_config
from levinson_errors import (
    SingularPointError,
    SpectralSingularityError,
    ValidationError,
    WrongAlgebraError,
)
from model_parameters import (
    Classification,
    ModelParams,
    NuParams,
    Params,
    Sign,
    classify,
    to_pair,
    varsigma,
)
from phase_tracking import PhaseTrace, adaptive_trace
from special_functions import (
    EULER_GAMMA,
    BesselKind,
    bessel_dim1,
    xi_cross,
    xi_cross_limit,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# |varsigma e^{2mx}| reaches e^{+-50} at the ends of the x sides
_X_EDGE_SPAN = 25.0


def _xi_pair(a: complex, b: complex, xi: np.ndarray) -> np.ndarray:
    """Xi_a(-xi) Xi_b(xi), with the analytic limits at xi = +-inf."""
    out = np.empty(xi.shape, dtype=complex)
    finite = np.isfinite(xi)
    if np.any(finite):
        out[finite] = xi_cross(a, b, xi[finite])
    out[xi == np.inf] = xi_cross_limit(a, b, 1)
    out[xi == -np.inf] = xi_cross_limit(a, b, -1)
    return out


# ---------------------------------------------------------------------------
# Symbols on the compactified square
# ---------------------------------------------------------------------------

class _ModelSymbol:
    """Gamma^{sign}_{m,kappa} evaluated on [-inf, inf]^2."""

    def __init__(self, p: ModelParams, sign: Sign):
        self.p = p
        self.sign = sign
        e = sign.unit
        self.m = p.m
        s = varsigma(p)
        self.log_varsigma: Optional[complex] = cmath.log(s) if s != 0 else None
        self.phase = cmath.exp(e * 1j * np.pi * (self.m - 0.5) / 2.0)
        self.den_coeff = cmath.exp(e * 1j * np.pi * self.m)
        self.tol = get_config().tol("singular_point")

    def _coupled(self, x: np.ndarray, lead: np.ndarray, tail: np.ndarray) -> np.ndarray:
        """(lead - t tail) / (1 - t c) with t = varsigma e^{2mx}, c = e^{+-i pi m}."""
        if self.log_varsigma is None:
            return lead.astype(complex)
        out = np.empty(x.shape, dtype=complex)
        infinite = ~np.isfinite(x)
        if np.any(infinite):
            if self.p.is_periodic:
                raise WrongAlgebraError("x -> +-inf has no limit when Re(m) = 0")
            vanishing = x[infinite] * self.m.real < 0
            out[infinite] = np.where(vanishing, lead[infinite], tail[infinite] / self.den_coeff)

        v = np.full(x.shape, np.nan + 0j)
        v[~infinite] = self.log_varsigma + 2.0 * self.m * x[~infinite]
        small = ~infinite & (v.real <= 0)
        large = ~infinite & (v.real > 0)

        t = np.exp(v[small])
        den_small = 1.0 - t * self.den_coeff
        ti = np.exp(-v[large])
        den_large = ti - self.den_coeff
        if np.any(np.abs(den_small) < self.tol) or np.any(np.abs(den_large) < self.tol):
            raise SingularPointError(
                f"Gamma^{self.sign.value} is singular at a point of Lambda (m={self.m}, kappa={self.p.kappa})"
            )
        out[small] = (lead[small] - t * tail[small]) / den_small
        out[large] = (lead[large] * ti - tail[large]) / den_large
        return out

    def __call__(self, x: ArrayLike, xi: ArrayLike) -> np.ndarray:
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        x = np.atleast_1d(x).astype(float)
        xi = np.atleast_1d(xi).astype(float)
        lead = _xi_pair(0.5, self.m, xi)
        tail = _xi_pair(0.5, -self.m, xi)
        return self.phase * self._coupled(x, lead, tail)


class _NuSymbol:
    """Gamma^{nu, sign}_0 evaluated on [-inf, inf]^2."""

    def __init__(self, p: NuParams, sign: Sign):
        self.p = p
        self.sign = sign
        e = sign.unit
        self.phase = cmath.exp(-e * 1j * np.pi / 4.0)
        self.den_shift = e * 1j * np.pi / 2.0
        self.tol = get_config().tol("singular_point")

    def __call__(self, x: ArrayLike, xi: ArrayLike) -> np.ndarray:
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        x = np.atleast_1d(x).astype(float)
        xi = np.atleast_1d(xi).astype(float)
        pair = _xi_pair(0.5, 0.0, xi)
        ratio = np.ones(x.shape, dtype=complex)
        finite = np.isfinite(x)
        d = EULER_GAMMA + x[finite] - self.p.nu
        den = d + self.den_shift
        if np.any(np.abs(den) < self.tol):
            raise SingularPointError(
                f"Gamma^(nu{self.sign.value}) is singular at x = {self.p.nu.real - EULER_GAMMA} (nu={self.p.nu})"
            )
        ratio[finite] = (d - 0.5j * np.pi * np.tanh(0.5 * np.pi * xi[finite])) / den
        return self.phase * pair * ratio


def _symbol(p: Params, sign: Any) -> Union[_ModelSymbol, _NuSymbol]:
    sign = Sign.parse(sign)
    if isinstance(p, NuParams):
        return _NuSymbol(p, sign)
    return _ModelSymbol(p, sign)


def _scalar_or_array(value: np.ndarray, *inputs: ArrayLike) -> Union[complex, np.ndarray]:
    if all(np.ndim(v) == 0 for v in inputs):
        return complex(value.ravel()[0])
    return value


def _require_finite(*values: ArrayLike) -> None:
    for v in values:
        if not np.all(np.isfinite(np.asarray(v, dtype=float))):
            raise ValidationError("Symbol arguments (x, xi) must be finite; use boundary_symbol for edges")


def symbol_full(p: ModelParams, sign: Any, x: ArrayLike, xi: ArrayLike) -> Union[complex, np.ndarray]:
    """Gamma^{sign}_{m,kappa}(x, xi) at finite (x, xi)."""
    _require_finite(x, xi)
    return _scalar_or_array(_symbol(p, sign)(x, xi), x, xi)


def symbol_nu_full(p: NuParams, sign: Any, x: ArrayLike, xi: ArrayLike) -> Union[complex, np.ndarray]:
    """Gamma^{nu, sign}_0(x, xi) at finite (x, xi)."""
    _require_finite(x, xi)
    return _scalar_or_array(_symbol(p, sign)(x, xi), x, xi)


def _restriction(p: Params, sign: Any, xi_end: float) -> Callable[[ArrayLike], Union[complex, np.ndarray]]:
    sym = _symbol(p, sign)

    def evaluate(x: ArrayLike) -> Union[complex, np.ndarray]:
        return _scalar_or_array(sym(x, xi_end), x)

    return evaluate


def smatrix(p: ModelParams) -> Callable[[ArrayLike], Union[complex, np.ndarray]]:
    """S(x) = e^{i pi (1/2 - m)} (1 - varsigma e^{i pi m} e^{2mx}) / (1 - varsigma e^{-i pi m} e^{2mx})."""
    return _restriction(p, Sign.MINUS, -np.inf)


def smatrix_plus(p: ModelParams) -> Callable[[ArrayLike], Union[complex, np.ndarray]]:
    """Plus-sign counterpart e^{i pi (m - 1/2)} (1 - varsigma e^{-i pi m} e^{2mx}) / (1 - varsigma e^{i pi m} e^{2mx})."""
    return _restriction(p, Sign.PLUS, np.inf)


def smatrix_nu(p: NuParams, sign: Any = "-") -> Callable[[ArrayLike], Union[complex, np.ndarray]]:
    """i (gamma + x - nu + i pi/2) / (gamma + x - nu - i pi/2) for the minus sign."""
    sign = Sign.parse(sign)
    return _restriction(p, sign, -np.inf if sign is Sign.MINUS else np.inf)


# ---------------------------------------------------------------------------
# Boundary symbol on the square
# ---------------------------------------------------------------------------

@dataclass
class EdgeCurve:
    """One side of the square, sampled on [lo, hi] with analytic end limits."""
    name: str
    variable: str
    func: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float
    limit_lo: complex
    limit_hi: complex
    center: float = 0.0
    scale: float = 1.0
    trace: Optional[PhaseTrace] = None

    def __call__(self, t: ArrayLike) -> np.ndarray:
        return self.func(np.atleast_1d(np.asarray(t, dtype=float)))

    def sample(self) -> PhaseTrace:
        if self.trace is None:
            self.trace = adaptive_trace(self.func, self.lo, self.hi, self.center, self.scale,
                                        self.limit_lo, self.limit_hi, label=self.name)
        return self.trace

    def to_frame(self) -> pd.DataFrame:
        trace = self.sample()
        return pd.DataFrame({
            "edge": self.name,
            "param": trace.params,
            "re": trace.values.real,
            "im": trace.values.imag,
        })


@dataclass
class BoundarySymbol:
    """Edges 1..4: x = -inf (in xi), xi = -inf (in x), x = +inf (in xi), xi = +inf (in x)."""
    params: Params
    sign: str
    classification: Classification
    edges: List[EdgeCurve] = field(default_factory=list)

    def edge(self, index: int) -> EdgeCurve:
        return self.edges[index - 1]

    def corner_residuals(self) -> Dict[str, float]:
        """Mismatch of adjacent edges at their truncation points, relative to max(1, |value|)."""
        e1, e2, e3, e4 = self.edges
        pairs = {
            "edge1_edge2": (e1(e1.lo), e2(e2.lo)),
            "edge2_edge3": (e2(e2.hi), e3(e3.lo)),
            "edge3_edge4": (e3(e3.hi), e4(e4.hi)),
            "edge4_edge1": (e4(e4.lo), e1(e1.hi)),
        }
        return {name: float(abs(a[0] - b[0]) / max(1.0, abs(b[0]))) for name, (a, b) in pairs.items()}

    def corner_limit_residuals(self) -> Dict[str, float]:
        """Mismatch of the analytic corner values."""
        e1, e2, e3, e4 = self.edges
        return {
            "edge1_edge2": abs(e1.limit_lo - e2.limit_lo),
            "edge2_edge3": abs(e2.limit_hi - e3.limit_lo),
            "edge3_edge4": abs(e3.limit_hi - e4.limit_hi),
            "edge4_edge1": abs(e4.limit_lo - e1.limit_hi),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.concat([e.to_frame() for e in self.edges], ignore_index=True)

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        logger.info("Boundary symbol curves written to %s", path)
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "sign": self.sign,
            "edges": [
                {
                    "name": e.name,
                    "variable": e.variable,
                    "range": [e.lo, e.hi],
                    "limits": [to_pair(e.limit_lo), to_pair(e.limit_hi)],
                }
                for e in self.edges
            ],
            "corner_residuals": self.corner_residuals(),
        }


def _x_edge_range(p: Params) -> Tuple[float, float, float, float]:
    """(lo, hi, center, scale) for the sides parametrized by x."""
    if isinstance(p, NuParams):
        trunc = get_config().windows["symbol_truncation"]
        center = p.nu.real - EULER_GAMMA
        return center - trunc, center + trunc, center, 1.0
    s = varsigma(p)
    if s == 0:
        return -1.0, 1.0, 0.0, 1.0
    m_r = p.m.real
    center = -math.log(abs(s)) / (2.0 * m_r)
    half = _X_EDGE_SPAN / abs(m_r)
    return center - half, center + half, center, 1.0 / abs(m_r)


def boundary_symbol(p: Params, sign: Any = "-") -> BoundarySymbol:
    """Restrict the symbol to the four sides of the compactified square."""
    sign = Sign.parse(sign)
    if isinstance(p, ModelParams) and p.is_periodic:
        raise WrongAlgebraError(
            "Re(m) = 0 belongs to the periodic algebra; use the periodic winding instead"
        )
    sym = _symbol(p, sign)
    trunc = float(get_config().windows["symbol_truncation"])
    x_lo, x_hi, x_center, x_scale = _x_edge_range(p)

    def fixed_x(x_value: float) -> Callable[[np.ndarray], np.ndarray]:
        return lambda xi: sym(np.full(np.shape(xi), x_value), xi)

    def fixed_xi(xi_value: float) -> Callable[[np.ndarray], np.ndarray]:
        return lambda x: sym(x, np.full(np.shape(x), xi_value))

    def corner(x_value: float, xi_value: float) -> complex:
        return complex(sym(x_value, xi_value)[0])

    inf = np.inf
    edges = [
        EdgeCurve("edge1", "xi", fixed_x(-inf), -trunc, trunc,
                  corner(-inf, -inf), corner(-inf, inf)),
        EdgeCurve("edge2", "x", fixed_xi(-inf), x_lo, x_hi,
                  corner(-inf, -inf), corner(inf, -inf), x_center, x_scale),
        EdgeCurve("edge3", "xi", fixed_x(inf), -trunc, trunc,
                  corner(inf, -inf), corner(inf, inf)),
        EdgeCurve("edge4", "x", fixed_xi(inf), x_lo, x_hi,
                  corner(-inf, inf), corner(inf, inf), x_center, x_scale),
    ]
    return BoundarySymbol(params=p, sign=sign.value, classification=classify(p), edges=edges)


# ---------------------------------------------------------------------------
# Resolvent kernels
# ---------------------------------------------------------------------------

@dataclass
class KernelEvaluation:
    """R(k^2 +- i0; r, s)."""
    k: float
    r: float
    s: float
    value: complex
    sign: str

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "r": self.r, "s": self.s, "value": to_pair(self.value), "sign": self.sign}


def _check_kernel_point(k: float, r: float, s: float) -> None:
    if k <= 0 or r <= 0 or s <= 0:
        raise ValidationError(f"Kernel needs k, r, s > 0, got k={k}, r={r}, s={s}")


def denominator(p: ModelParams, sign: Any, k: ArrayLike) -> Union[complex, np.ndarray]:
    """1 - varsigma e^{-+ i pi m} (k/2)^{2m}; the upper sign belongs to k^2 + i0."""
    sign = Sign.parse(sign)
    k_arr = np.asarray(k, dtype=float)
    s = varsigma(p)
    if s == 0:
        out = np.ones(k_arr.shape, dtype=complex)
    else:
        u = cmath.log(s) - sign.unit * 1j * np.pi * p.m + 2.0 * p.m * np.log(k_arr / 2.0)
        out = 1.0 - np.exp(u)
    return complex(out) if k_arr.ndim == 0 else out


def denominator_nu(p: NuParams, sign: Any, k: ArrayLike) -> Union[complex, np.ndarray]:
    """gamma + ln(k/2) - nu -+ i pi/2."""
    sign = Sign.parse(sign)
    k_arr = np.asarray(k, dtype=float)
    out = EULER_GAMMA + np.log(k_arr / 2.0) - p.nu - sign.unit * 0.5j * np.pi
    return complex(out) if k_arr.ndim == 0 else out


def resolvent_kernel(p: ModelParams, sign: Any, k: float, r: float, s: float) -> KernelEvaluation:
    """
    Integral kernel of (H_{m,kappa} - k^2 -+ i0)^{-1}.

    For r <= s: +-i / (k D) (J_m(kr) - varsigma (k/2)^{2m} J_{-m}(kr)) H^{+-}_m(ks)
    with D the denominator above and all Bessel functions of dimension 1.
    """
    sign = Sign.parse(sign)
    _check_kernel_point(k, r, s)
    den = denominator(p, sign, k)
    if abs(den) < get_config().tol("spectral_singularity"):
        raise SpectralSingularityError(
            f"k = {k} is a spectral singularity of H_(m={p.m}, kappa={p.kappa}) for k^2 {sign.value} i0"
        )
    near, far = min(r, s), max(r, s)
    coupling = varsigma(p) * (k / 2.0) ** (2.0 * p.m)
    regular = complex(bessel_dim1(BesselKind.J, p.m, k * near))
    if coupling != 0:
        regular -= coupling * complex(bessel_dim1(BesselKind.J, -p.m, k * near))
    outgoing_kind = BesselKind.H_PLUS if sign is Sign.PLUS else BesselKind.H_MINUS
    outgoing = complex(bessel_dim1(outgoing_kind, p.m, k * far))
    value = sign.unit * 1j / (k * den) * regular * outgoing
    return KernelEvaluation(k=k, r=r, s=s, value=value, sign=sign.value)


def resolvent_kernel_nu(p: NuParams, sign: Any, k: float, r: float, s: float) -> KernelEvaluation:
    """Kernel of (H_0^nu - k^2 -+ i0)^{-1}: +-i/(k D) ((gamma + ln(k/2) - nu) J_0(kr) - pi/2 Y_0(kr)) H^{+-}_0(ks)."""
    sign = Sign.parse(sign)
    _check_kernel_point(k, r, s)
    den = denominator_nu(p, sign, k)
    if abs(den) < get_config().tol("spectral_singularity"):
        raise SpectralSingularityError(
            f"k = {k} is a spectral singularity of H_0^nu (nu={p.nu}) for k^2 {sign.value} i0"
        )
    near, far = min(r, s), max(r, s)
    c = EULER_GAMMA + math.log(k / 2.0) - p.nu
    regular = (c * complex(bessel_dim1(BesselKind.J, 0.0, k * near))
               - 0.5 * np.pi * complex(bessel_dim1(BesselKind.Y, 0.0, k * near)))
    outgoing_kind = BesselKind.H_PLUS if sign is Sign.PLUS else BesselKind.H_MINUS
    outgoing = complex(bessel_dim1(outgoing_kind, 0.0, k * far))
    value = sign.unit * 1j / (k * den) * regular * outgoing
    return KernelEvaluation(k=k, r=r, s=s, value=value, sign=sign.value)


# ---------------------------------------------------------------------------
# Root finding on the denominator
# ---------------------------------------------------------------------------

# smallest relative tolerance brentq accepts
_BRENT_RTOL = 4.0 * np.finfo(float).eps


def _log_exponent(p: ModelParams, sign: Sign, t: float) -> complex:
    """u(t) with denominator 1 - e^{u}, t = ln(k/2)."""
    return cmath.log(varsigma(p)) - sign.unit * 1j * np.pi * p.m + 2.0 * p.m * t


def _is_root(u: complex, tol: float) -> bool:
    turns = u.imag / (2.0 * np.pi)
    return abs(u.real) <= 2.0 * np.pi * tol * max(1.0, abs(turns)) and \
        abs(turns - round(turns)) <= tol * max(1.0, abs(turns))


def denominator_roots(p: ModelParams, sign: Any,
                      k_window: Optional[Tuple[float, float]] = None) -> List[float]:
    """Zeros k > 0 of the resolvent denominator, found by bracketing on t = ln(k/2)."""
    sign = Sign.parse(sign)
    if p.kappa == 0:
        raise ValidationError("denominator_roots needs kappa != 0")
    cfg = get_config()
    k_lo, k_hi = k_window if k_window is not None else cfg.window("singularity_momentum")
    if not (0 < k_lo < k_hi < math.inf):
        raise ValidationError(f"k_window must satisfy 0 < lo < hi < inf, got {(k_lo, k_hi)}")
    tol = cfg.tol("branch_integer")
    t_lo, t_hi = math.log(k_lo / 2.0), math.log(k_hi / 2.0)
    roots: List[float] = []

    if not p.is_periodic:
        def real_part(t: float) -> float:
            return _log_exponent(p, sign, t).real

        f_lo, f_hi = real_part(t_lo), real_part(t_hi)
        if f_lo * f_hi > 0:
            return roots
        t_star = t_lo if f_lo == 0 else t_hi if f_hi == 0 else brentq(real_part, t_lo, t_hi, xtol=1e-15, rtol=_BRENT_RTOL)
        if _is_root(_log_exponent(p, sign, t_star), tol):
            roots.append(2.0 * math.exp(t_star))
        return roots

    if abs(_log_exponent(p, sign, 0.0).real) > 2.0 * np.pi * tol:
        return roots

    def half_phase(t: float) -> float:
        return math.sin(_log_exponent(p, sign, t).imag / 2.0)

    slope = abs(2.0 * p.m.imag)
    points = max(400, int(8.0 * (t_hi - t_lo) * slope / np.pi) + 2)
    grid = np.linspace(t_lo, t_hi, points)
    values = np.array([half_phase(t) for t in grid])
    for i in range(points - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            t_star = grid[i]
        elif a * b < 0:
            t_star = brentq(half_phase, grid[i], grid[i + 1], xtol=1e-15, rtol=_BRENT_RTOL)
        else:
            continue
        roots.append(2.0 * math.exp(t_star))
    if values[-1] == 0.0:
        roots.append(2.0 * math.exp(grid[-1]))
    return sorted(roots)


def denominator_ratio(p: ModelParams, sign: Any, k_o: float,
                      offsets: Sequence[float] = (1e-3, 1e-4, 1e-5)) -> List[float]:
    """|denominator(k)| / |k^2 - k_o^2| at k = k_o (1 + delta)."""
    ratios = []
    for delta in offsets:
        k = k_o * (1.0 + delta)
        ratios.append(abs(denominator(p, sign, k)) / abs(k * k - k_o * k_o))
    return ratios
