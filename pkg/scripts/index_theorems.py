#!/usr/bin/env python3
"""
Index Theorems

Winding numbers of the boundary symbol on the square and of the periodic
scattering matrix, the per-period trace Trace_n of separated operators
a(D) b(X), and the reports that compare the topological side (winding) with
the spectral side (eigenvalue count, Trace_n of the point-spectrum projection).
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Any, Optional, Union

import numpy as np
from scipy.integrate import quad

from levinson_config import get_config
from levinson_errors import (
    ConvergenceError,
    DivergentTraceError,
    NotFredholmError,
    ValidationError,
    WrongAlgebraError,
)
from model_parameters import ModelParams, Params, Sign, classify, to_pair, varsigma
from phase_tracking import adaptive_trace
from point_spectrum import count_bounds, eigenvalue_count
from scattering_symbols import BoundarySymbol, boundary_symbol, smatrix
from special_functions import xi_cross

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Winding numbers
# ---------------------------------------------------------------------------

@dataclass
class WindingResult:
    """Integer winding with the raw phase data behind it."""
    value: int
    phase_increment: float
    min_modulus: float
    samples_used: int

    @property
    def rounding_residual(self) -> float:
        return abs(self.phase_increment / (2.0 * np.pi) - self.value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "winding": self.value,
            "phase_increment": self.phase_increment,
            "min_modulus": self.min_modulus,
            "samples_used": self.samples_used,
        }


def _rounded(turns: float, phase: float, min_modulus: float, samples: int) -> WindingResult:
    value = int(round(turns))
    result = WindingResult(value=value, phase_increment=phase, min_modulus=min_modulus, samples_used=samples)
    if abs(turns - value) >= get_config().tol("winding_rounding"):
        raise ConvergenceError(f"Winding {turns:.4f} is not close to an integer")
    return result


# Direction of each edge along the corner chain 1 -> 2 -> 3 -> 4
_CHAIN_DIRECTION = (-1, 1, 1, -1)


def winding_square(b: BoundarySymbol) -> WindingResult:
    """Number of turns of the boundary symbol around 0, counted opposite to the corner chain."""
    if b.classification.exceptional:
        raise NotFredholmError(
            f"Exceptional parameters {b.params.to_dict()}: not Fredholm, the winding number is undefined"
        )
    traces = [edge.sample() for edge in b.edges]
    chain_phase = sum(d * t.increment for d, t in zip(_CHAIN_DIRECTION, traces))
    phase = -chain_phase
    return _rounded(
        phase / (2.0 * np.pi),
        phase,
        min(t.min_modulus for t in traces),
        sum(t.samples_used for t in traces),
    )


def _periodic_params(n: float, kappa: complex) -> ModelParams:
    if n <= 0:
        raise ValidationError(f"n must be > 0, got {n}")
    p = ModelParams(m=1j * n, kappa=complex(kappa))
    if p.kappa == 0:
        raise ValidationError("The periodic index needs kappa != 0")
    if classify(p).exceptional:
        raise NotFredholmError(
            f"ln|kappa|/n = {math.log(abs(p.kappa)) / n:.12g} is +-pi: exceptional pair, not Fredholm"
        )
    return p


def winding_periodic(n: float, kappa: complex) -> WindingResult:
    """Turns of S_{in,kappa}(x) over one period x in [0, pi/n]."""
    p = _periodic_params(n, kappa)
    s = smatrix(p)
    period = np.pi / n
    start = complex(s(0.0))
    trace = adaptive_trace(lambda x: np.asarray(s(x)), 0.0, period, center=0.5 * period,
                           scale=period, limit_hi=start, label="S_in_kappa")
    return _rounded(trace.increment / (2.0 * np.pi), trace.increment, trace.min_modulus, trace.samples_used)


# ---------------------------------------------------------------------------
# Fourier coefficients of F_{in,kappa}
# ---------------------------------------------------------------------------

def _alpha_beta(p: ModelParams, n: float):
    s = varsigma(p)
    return s * math.exp(-np.pi * n), s * math.exp(np.pi * n)


def periodic_f(n: float, kappa: complex) -> Callable[[np.ndarray], np.ndarray]:
    """F(x) = -1 / ((1 - alpha u)(1 - beta u)), u = e^{2inx}."""
    p = _periodic_params(n, kappa)
    alpha, beta = _alpha_beta(p, n)

    def f(x):
        u = np.exp(2j * n * np.asarray(x, dtype=float))
        return -1.0 / ((1.0 - alpha * u) * (1.0 - beta * u))

    return f


def _complex_quad(func: Callable[[float], complex], a: float, b: float) -> complex:
    q = get_config().quadrature
    opts = dict(epsabs=q["epsabs"], epsrel=q["epsrel"], limit=int(q["limit"]))
    re, _ = quad(lambda t: complex(func(t)).real, a, b, **opts)
    im, _ = quad(lambda t: complex(func(t)).imag, a, b, **opts)
    return complex(re, im)


def fourier_coefficient(n: float, kappa: complex, ell: int) -> complex:
    """c_ell = (n/pi) int_0^{pi/n} F(x) e^{-2in ell x} dx, by quadrature."""
    f = periodic_f(n, kappa)
    period = np.pi / n

    def integrand(x: float) -> complex:
        return complex(f(x)) * cmath.exp(-2j * n * ell * x)

    return _complex_quad(integrand, 0.0, period) / period


def fourier_coefficient_exact(n: float, kappa: complex, ell: int) -> complex:
    """c_ell from the geometric-series expansion of F in u = e^{2inx}."""
    p = _periodic_params(n, kappa)
    alpha, beta = _alpha_beta(p, n)
    gap = beta - alpha
    inside = abs(alpha) < 1.0 < abs(beta)
    if inside:
        return alpha ** (ell + 1) / gap if ell >= 0 else beta ** (ell + 1) / gap
    if abs(alpha) > 1.0:
        return (beta ** (ell + 1) - alpha ** (ell + 1)) / gap if ell <= -1 else 0j
    return (alpha ** (ell + 1) - beta ** (ell + 1)) / gap if ell >= 0 else 0j


# ---------------------------------------------------------------------------
# Separated operators and Trace_n
# ---------------------------------------------------------------------------

def g_function(n: float, sign: Any, xi: Union[float, np.ndarray]) -> Union[complex, np.ndarray]:
    """G_n^{+-}(xi) = e^{+-pi n} (e^{pi xi} + e^{-+pi n}) / (e^{pi xi} + e^{+-pi n})."""
    e = Sign.parse(sign).unit
    xi_arr = np.asarray(xi, dtype=float)
    flat = np.atleast_1d(xi_arr)
    q = math.exp(e * np.pi * n)
    out = np.empty(flat.shape, dtype=complex)
    low = flat <= 0
    ex = np.exp(np.pi * flat[low])
    out[low] = q * (ex + 1.0 / q) / (ex + q)
    # divided through by e^{pi xi} when xi > 0
    ex_inv = np.exp(-np.pi * flat[~low])
    out[~low] = q * (1.0 + ex_inv / q) / (1.0 + q * ex_inv)
    return complex(out[0]) if xi_arr.ndim == 0 else out.reshape(xi_arr.shape)


def g_function_xi(n: float, sign: Any, xi: Union[float, np.ndarray]) -> Union[complex, np.ndarray]:
    """The same function written as Xi_{+-in}(-xi) Xi_{-+in}(xi)."""
    e = Sign.parse(sign).unit
    return xi_cross(e * 1j * n, -e * 1j * n, xi)


def g_limit(n: float, sign: Any, end: int) -> float:
    """G_n^{+-}(end * inf)."""
    e = Sign.parse(sign).unit
    return math.exp(e * end * np.pi * n)


@dataclass
class SeparatedTerm:
    """coefficient * a(D) e^{2in frequency X}; telescoping when a = h(xi - shift) - h(xi)."""
    coefficient: complex
    frequency: int
    symbol: Callable[[np.ndarray], np.ndarray]
    shift: Optional[float] = None
    saturating_limits: Optional[tuple] = None
    label: str = ""

    @property
    def telescoping(self) -> bool:
        return self.shift is not None and self.saturating_limits is not None


@dataclass
class SeparatedOperator:
    """Finite sum of separated terms a(D) b(X)."""
    terms: List[SeparatedTerm] = field(default_factory=list)

    def __add__(self, other: "SeparatedOperator") -> "SeparatedOperator":
        return SeparatedOperator(self.terms + other.terms)

    def subset(self, prefix: str) -> "SeparatedOperator":
        return SeparatedOperator([t for t in self.terms if t.label.startswith(prefix)])


_DECAY_SAMPLE = 1e3


def _check_integrable(term: SeparatedTerm) -> None:
    if term.telescoping:
        return
    tail_x = np.array([-_DECAY_SAMPLE, _DECAY_SAMPLE])
    tails = np.abs(np.asarray(term.symbol(tail_x), dtype=complex))
    if np.any(tails > 1e-8):
        raise DivergentTraceError(
            f"Term {term.label or '?'}: a(xi) does not decay ({tails.max():.3e} at |xi| = {_DECAY_SAMPLE:g}) "
            "and has no telescoping form; Trace_n diverges"
        )


def _symbol_integral(term: SeparatedTerm) -> complex:
    if term.telescoping:
        h_minus, h_plus = term.saturating_limits
        return -term.shift * (h_plus - h_minus)
    split = float(get_config().quadrature["split"])

    def a(xi: float) -> complex:
        return complex(np.asarray(term.symbol(np.array([xi])), dtype=complex)[0])

    return (_complex_quad(a, -np.inf, -split) + _complex_quad(a, -split, split)
            + _complex_quad(a, split, np.inf))


def trace_n(op: SeparatedOperator, n: float) -> complex:
    """
    Trace_n(a(D) b(X)) = (1/2n) int a(xi) dxi * (n/pi) int_0^{pi/n} b(x) dx.

    The period average of e^{2in l x} vanishes unless l = 0, so only
    frequency-zero terms contribute; every term is still checked for a
    convergent a-integral.
    """
    if n <= 0:
        raise ValidationError(f"n must be > 0, got {n}")
    total = 0j
    for term in op.terms:
        _check_integrable(term)
        if term.frequency == 0:
            total += term.coefficient * _symbol_integral(term) / (2.0 * n)
    return total


def periodic_commutator(n: float, kappa: complex, ell_max: int = 40) -> SeparatedOperator:
    """
    The I and J terms of the point-spectrum projection for m = in.

    I: varsigma^2 c_l G+(D) {G-(D - 2n(l+2)) - G-(D)} e^{2in(l+2)X}
    J: varsigma c_l {G+(D - 2nl) - G+(D)} e^{2in(l+1)X}
    with |l| <= ell_max; Trace_n of the sum is Trace_n of the projection.
    """
    p = _periodic_params(n, kappa)
    s = varsigma(p)
    terms: List[SeparatedTerm] = []
    g_plus_limits = (g_limit(n, "+", -1), g_limit(n, "+", 1))

    for ell in range(-ell_max, ell_max + 1):
        c = fourier_coefficient_exact(n, kappa, ell)
        if c == 0:
            continue
        shift_i = 2.0 * n * (ell + 2)

        def i_symbol(xi, shift=shift_i):
            return g_function(n, "+", xi) * (g_function(n, "-", xi - shift) - g_function(n, "-", xi))

        terms.append(SeparatedTerm(s * s * c, ell + 2, i_symbol, label=f"I[{ell}]"))

        shift_j = 2.0 * n * ell

        def j_symbol(xi, shift=shift_j):
            return g_function(n, "+", xi - shift) - g_function(n, "+", xi)

        terms.append(SeparatedTerm(s * c, ell + 1, j_symbol, shift=shift_j,
                                   saturating_limits=g_plus_limits, label=f"J[{ell}]"))
    return SeparatedOperator(terms)


# ---------------------------------------------------------------------------
# Verification reports
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    """Both sides of an index identity with named checks."""
    params: Dict[str, Any]
    winding: int
    eigenvalue_count: Union[int, str]
    trace_value: Optional[float] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params,
            "winding": self.winding,
            "count": self.eigenvalue_count,
            "trace": self.trace_value,
            "residuals": self.residuals,
            "checks": {name: ("pass" if ok else "fail") for name, ok in self.checks.items()},
            "verdict": self.verdict,
        }


_CORNER_TOLERANCE = 1e-3


def verify_levinson(p: Params) -> VerificationReport:
    """Winding of the minus boundary symbol against the number of eigenvalues."""
    if isinstance(p, ModelParams) and p.is_periodic:
        raise WrongAlgebraError("Re(m) = 0: use verify_periodic_levinson")
    b = boundary_symbol(p, Sign.MINUS)
    winding = winding_square(b)
    count = eigenvalue_count(p)
    corners = b.corner_residuals()
    report = VerificationReport(
        params=p.to_dict(),
        winding=winding.value,
        eigenvalue_count=count,
        residuals={
            "winding_rounding": winding.rounding_residual,
            "corner_max": max(corners.values()),
        },
        checks={
            "winding_equals_count": isinstance(count, int) and winding.value == count,
            "corner_matching": max(corners.values()) < _CORNER_TOLERANCE,
        },
    )
    logger.info("Levinson check %s: winding=%d count=%s -> %s",
                p.to_dict(), winding.value, count, report.verdict)
    return report


def verify_periodic_levinson(n: float, kappa: complex, ell_max: int = 40) -> VerificationReport:
    """Winding of S_{in,kappa} per period against -Trace_n of the point-spectrum projection."""
    p = _periodic_params(n, kappa)
    winding = winding_periodic(n, kappa)
    s = varsigma(p)
    spread = math.exp(np.pi * n) - math.exp(-np.pi * n)

    c_exact = fourier_coefficient_exact(n, kappa, -1)
    c_quad = fourier_coefficient(n, kappa, -1)
    trace = s * c_exact * spread
    op = periodic_commutator(n, kappa, ell_max)
    assembled = trace_n(op, n)
    trace_i = trace_n(op.subset("I"), n)

    scale = max(abs(c_exact), 1.0 / abs(s * spread))
    bounds = count_bounds(p)
    count: Union[int, str] = "infinite" if bounds.kind == "infinite" else 0

    report = VerificationReport(
        params={"family": "H_mk", "n": n, "kappa": to_pair(complex(kappa))},
        winding=winding.value,
        eigenvalue_count=count,
        trace_value=float(trace.real),
        residuals={
            "winding_rounding": winding.rounding_residual,
            "c_minus_one": abs(c_quad - c_exact) / scale,
            "trace_assembled": abs(assembled - trace),
            "trace_i_term": abs(trace_i),
            "trace_imaginary": abs(trace.imag),
        },
        checks={
            "winding_equals_minus_trace": winding.value == -int(round(trace.real)),
            "c_minus_one_quadrature": abs(c_quad - c_exact) <= 1e-8 * scale,
            "trace_n_assembled": abs(assembled - trace) < 1e-8,
            "eigenvalue_verdict": (count == "infinite") == (winding.value == -1),
        },
    )
    logger.info("Periodic Levinson check n=%g kappa=%s: winding=%d trace=%.12g -> %s",
                n, kappa, winding.value, trace.real, report.verdict)
    return report
