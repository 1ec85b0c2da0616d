#!/usr/bin/env python3
"""
Special Functions for Inverse-Square Potentials

Complex Gamma (Lanczos approximation with reflection), the Xi symbol

    Xi_m(t) = exp(i ln(2) t) Gamma((m+1+it)/2) / Gamma((m+1-it)/2),

and the dimension-1 Bessel family sqrt(pi z / 2) * (classical function)
(with sqrt(2 z / pi) for the MacDonald function). Real orders are served by
scipy.special; complex orders use ascending power series on |z| <= 30.

All functions accept scalars or numpy arrays and return the same shape.
"""

import cmath
import logging
from enum import Enum
from typing import Any, Tuple, Union

import numpy as np
from scipy import special

from levinson_config import get_config
from levinson_errors import DomainError, NearIntegerOrderError, PoleError

logger = logging.getLogger(__name__)

ComplexLike = Union[complex, float, int, np.ndarray]

EULER_GAMMA = float(np.euler_gamma)

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_TWO_PI = 0.5 * np.log(2.0 * np.pi)

SERIES_MAX_ARGUMENT = 30.0
SERIES_MAX_TERMS = 200
SERIES_RELATIVE_CUTOFF = 1e-16


class BesselKind(Enum):
    """Dimension-1 Bessel function kinds."""
    J = "J"
    Y = "Y"
    H_PLUS = "H_plus"
    H_MINUS = "H_minus"
    I = "I"
    K = "K"

    @classmethod
    def parse(cls, value: Any) -> "BesselKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if str(value).lower() in (kind.value.lower(), kind.name.lower()):
                return kind
        raise DomainError(f"Unknown Bessel kind: {value}")


def _as_complex(z: ComplexLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    return np.atleast_1d(arr).copy(), arr.ndim == 0


def _finish(arr: np.ndarray, scalar: bool) -> ComplexLike:
    return complex(arr.ravel()[0]) if scalar else arr


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    """Log-Gamma for Re z >= 1/2."""
    z = z - 1.0
    x = np.full(z.shape, _LANCZOS_COEFFS[0], dtype=complex)
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        x = x + coeff / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _check_poles(z: np.ndarray) -> None:
    tol = get_config().tol("pole")
    nearest = np.round(z.real)
    at_pole = (nearest <= 0) & (np.abs(z.real - nearest) < tol) & (np.abs(z.imag) < tol)
    if np.any(at_pole):
        bad = z[at_pole].ravel()[0]
        raise PoleError(f"Gamma has a pole at z = {bad}")


def gamma(z: ComplexLike) -> ComplexLike:
    """
    Complex Gamma function.

    Uses the Lanczos approximation on Re z >= 1/2 and the reflection formula
    Gamma(z) Gamma(1-z) = pi / sin(pi z) below. Raises PoleError at the
    non-positive integers.
    """
    arr, scalar = _as_complex(z)
    _check_poles(arr)
    out = np.empty(arr.shape, dtype=complex)
    right = arr.real >= 0.5
    out[right] = np.exp(_lanczos_log_gamma(arr[right]))
    left = ~right
    if np.any(left):
        zl = arr[left]
        out[left] = np.pi / (np.sin(np.pi * zl) * np.exp(_lanczos_log_gamma(1.0 - zl)))
    return _finish(out, scalar)


def log_gamma(z: ComplexLike) -> ComplexLike:
    """
    Log-Gamma, continuous in Im z on the right half plane.

    Arguments with Re z < 1/2 are shifted up with Gamma(z) = Gamma(z+k) / prod(z+j);
    only differences and exponentials of the result are meaningful.
    """
    arr, scalar = _as_complex(z)
    _check_poles(arr)
    shifts = np.maximum(0, np.ceil(0.5 - arr.real)).astype(int)
    if shifts.size and shifts.max() > 64:
        raise DomainError("log_gamma supports Re z > -63 only")
    shifted = arr + shifts
    out = _lanczos_log_gamma(shifted)
    for j in range(int(shifts.max()) if shifts.size else 0):
        mask = shifts > j
        out[mask] = out[mask] - np.log(arr[mask] + j)
    return _finish(out, scalar)


# ---------------------------------------------------------------------------
# Xi symbol
# ---------------------------------------------------------------------------

def xi(m: complex, t: ComplexLike) -> ComplexLike:
    """Xi_m(t) = e^{i ln2 t} Gamma((m+1+it)/2) / Gamma((m+1-it)/2), for Re m > -1."""
    m = complex(m)
    if m.real <= -1.0:
        raise DomainError(f"Xi_m requires Re(m) > -1, got m = {m}")
    arr, scalar = _as_complex(t)
    tt = arr.real
    a = (m + 1.0 + 1j * tt) / 2.0
    b = (m + 1.0 - 1j * tt) / 2.0
    out = np.exp(1j * np.log(2.0) * tt + log_gamma(a) - log_gamma(b))
    return _finish(np.asarray(out, dtype=complex), scalar)


def xi_cross(a: complex, b: complex, t: ComplexLike) -> ComplexLike:
    """The product Xi_a(-t) Xi_b(t)."""
    arr, scalar = _as_complex(t)
    out = np.asarray(xi(a, -arr.real), dtype=complex) * np.asarray(xi(b, arr.real), dtype=complex)
    return _finish(out, scalar)


def xi_cross_limit(a: complex, b: complex, end: int) -> complex:
    """Limit of Xi_a(-t) Xi_b(t) as t -> end * infinity (end = +1 or -1)."""
    if end not in (1, -1):
        raise DomainError("end must be +1 or -1")
    return cmath.exp(end * 1j * np.pi * (complex(b) - complex(a)) / 2.0)


# ---------------------------------------------------------------------------
# Dimension-1 Bessel functions
# ---------------------------------------------------------------------------

def _series_j(m: complex, z: np.ndarray, modified: bool = False) -> np.ndarray:
    """Ascending series for J_m (or I_m when modified)."""
    half = z / 2.0
    sign = 1.0 if modified else -1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        term = np.exp(m * np.log(half)) / complex(gamma(m + 1.0))
    term = np.where(z == 0, 0.0 if m.real > 0 else np.nan, term).astype(complex)
    total = term.copy()
    q = sign * half * half
    for k in range(1, SERIES_MAX_TERMS):
        term = term * q / (k * (m + k))
        total = total + term
        if np.all(np.abs(term) <= SERIES_RELATIVE_CUTOFF * np.abs(total)):
            break
    else:
        logger.debug("Bessel series hit the %d-term cap", SERIES_MAX_TERMS)
    return total


def _harmonic_series(z: np.ndarray, alternating: bool) -> np.ndarray:
    """Sum_{k>=1} (+-1)^{k+1} H_k (z^2/4)^k / (k!)^2."""
    q = z * z / 4.0
    power = np.ones(z.shape, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    harmonic = 0.0
    for k in range(1, SERIES_MAX_TERMS):
        harmonic += 1.0 / k
        power = power * q / (k * k)
        term = harmonic * power
        if alternating and k % 2 == 0:
            term = -term
        total = total + term
        if np.all(np.abs(term) <= SERIES_RELATIVE_CUTOFF * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _near_integer_guard(m: complex) -> None:
    tol = get_config().tol("near_integer_order")
    nearest = round(m.real)
    if abs(m - nearest) < tol and m != 0:
        raise NearIntegerOrderError(
            f"Order m = {m} is within {tol} of the integer {nearest}; the Y/K combination is singular there"
        )


def _series_y(m: complex, z: np.ndarray) -> np.ndarray:
    if m == 0:
        j0 = _series_j(0j, z)
        return (2.0 / np.pi) * ((np.log(z / 2.0) + EULER_GAMMA) * j0 + _harmonic_series(z, alternating=True))
    _near_integer_guard(m)
    return (_series_j(m, z) * np.cos(m * np.pi) - _series_j(-m, z)) / np.sin(m * np.pi)


def _series_k(m: complex, z: np.ndarray) -> np.ndarray:
    if m == 0:
        i0 = _series_j(0j, z, modified=True)
        return -(np.log(z / 2.0) + EULER_GAMMA) * i0 + _harmonic_series(z, alternating=False)
    _near_integer_guard(m)
    return (np.pi / 2.0) * (_series_j(-m, z, modified=True) - _series_j(m, z, modified=True)) / np.sin(m * np.pi)


def _classical_series(kind: BesselKind, m: complex, z: np.ndarray) -> np.ndarray:
    if np.any(np.abs(z) > SERIES_MAX_ARGUMENT):
        raise DomainError(f"Power-series Bessel backend requires |z| <= {SERIES_MAX_ARGUMENT}")
    if abs(m.real) >= 1.0:
        raise DomainError(f"Power-series Bessel backend requires |Re(m)| < 1, got m = {m}")
    if kind is BesselKind.J:
        return _series_j(m, z)
    if kind is BesselKind.I:
        return _series_j(m, z, modified=True)
    if kind is BesselKind.K:
        return _series_k(m, z)
    y = _series_y(m, z)
    if kind is BesselKind.Y:
        return y
    j = _series_j(m, z)
    return j + 1j * y if kind is BesselKind.H_PLUS else j - 1j * y


def _classical_scipy(kind: BesselKind, m: float, z: np.ndarray) -> np.ndarray:
    if kind is BesselKind.J:
        return special.jv(m, z)
    if kind is BesselKind.Y:
        return special.yv(m, z)
    if kind is BesselKind.H_PLUS:
        return special.hankel1(m, z)
    if kind is BesselKind.H_MINUS:
        return special.hankel2(m, z)
    if kind is BesselKind.I:
        return special.iv(m, z)
    return special.kv(m, z)


def bessel_dim1(kind: Any, m: complex, z: ComplexLike, backend: str = "auto") -> ComplexLike:
    """
    Dimension-1 Bessel function of the given kind.

    J, Y, H_plus, H_minus and I carry the factor sqrt(pi z / 2), K carries
    sqrt(2 z / pi). backend="auto" uses scipy.special for real orders and the
    power series for complex orders; backend="series" forces the series.
    """
    kind = BesselKind.parse(kind)
    m = complex(m)
    arr, scalar = _as_complex(z)
    if backend not in ("auto", "series"):
        raise DomainError(f"Unknown Bessel backend: {backend}")

    if backend == "auto" and m.imag == 0.0:
        classical = np.asarray(_classical_scipy(kind, m.real, arr), dtype=complex)
    else:
        classical = _classical_series(kind, m, arr)

    if kind is BesselKind.K:
        factor = np.sqrt(2.0 * arr / np.pi)
    else:
        factor = np.sqrt(np.pi * arr / 2.0)
    return _finish(np.asarray(factor * classical, dtype=complex), scalar)
