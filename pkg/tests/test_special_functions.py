#!/usr/bin/env python3
"""
Tests for Special Functions
"""

import cmath
import math

import numpy as np
import pytest
import sys
from pathlib import Path
from scipy import special

# Add scripts directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from special_functions import (
    BesselKind,
    bessel_dim1,
    gamma,
    log_gamma,
    xi,
    xi_cross,
    xi_cross_limit,
)
from levinson_errors import DomainError, NearIntegerOrderError, PoleError


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(20240607)


class TestGamma:
    """Tests for the complex Gamma function."""

    def test_known_values(self):
        """Test integer and half-integer values."""
        assert abs(gamma(5.0) - 24.0) < 1e-10
        assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-13
        assert abs(gamma(-0.5) + 2.0 * math.sqrt(math.pi)) < 1e-12

    def test_matches_scipy(self, rng):
        """Test agreement with scipy on random complex arguments."""
        z = rng.uniform(-4.5, 4.5, 200) + 1j * rng.uniform(-4.0, 4.0, 200)
        ours = gamma(z)
        reference = special.gamma(z)
        assert np.max(np.abs(ours - reference) / np.abs(reference)) < 1e-10

    def test_reflection_identity(self, rng):
        """Test Gamma(1/2+z) Gamma(1/2-z) = pi / cos(pi z) on 1000 random z."""
        z = rng.uniform(-3.0, 3.0, 1000) + 1j * rng.uniform(-2.0, 2.0, 1000)
        lhs = gamma(0.5 + z) * gamma(0.5 - z)
        rhs = np.pi / np.cos(np.pi * z)
        assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-10

    @pytest.mark.parametrize("pole", [0.0, -1.0, -3.0])
    def test_pole_raises(self, pole):
        """Test PoleError at the non-positive integers."""
        with pytest.raises(PoleError):
            gamma(pole)

    def test_scalar_and_array_shapes(self):
        """Test scalars stay scalars and arrays keep their shape."""
        assert isinstance(gamma(2.5), complex)
        assert gamma(np.array([[1.0, 2.0], [3.0, 4.0]])).shape == (2, 2)


class TestLogGamma:
    """Tests for log-Gamma."""

    def test_exp_matches_gamma(self):
        """Test exp(log_gamma) against gamma, including the shifted region."""
        z = np.array([0.3 + 0.2j, -0.7 + 1.5j, 2.5 - 3.0j, -2.4 + 0.1j])
        assert np.max(np.abs(np.exp(log_gamma(z)) / gamma(z) - 1.0)) < 1e-11

    def test_large_imaginary_part(self):
        """Test the real part at Im z = 5000 against scipy."""
        z = (1.5 + 1e4j) / 2.0
        assert abs(log_gamma(z).real - special.loggamma(z).real) < 1e-8 * abs(special.loggamma(z).real)


class TestXi:
    """Tests for the Xi symbol."""

    @pytest.mark.parametrize("m", [0.5, 0.0, -0.6, 0.3 + 0.4j, 1j])
    def test_inverse_under_reflection(self, m):
        """Test Xi_m(-t) Xi_m(t) = 1."""
        t = np.linspace(-30.0, 30.0, 61)
        assert np.max(np.abs(xi(m, -t) * xi(m, t) - 1.0)) < 1e-12

    def test_value_at_zero(self):
        """Test Xi_m(0) = 1."""
        assert abs(xi(0.3 + 0.4j, 0.0) - 1.0) < 1e-14

    def test_unimodular_for_real_order(self):
        """Test |Xi_m(t)| = 1 for real m."""
        t = np.linspace(-50.0, 50.0, 101)
        assert np.max(np.abs(np.abs(xi(0.7, t)) - 1.0)) < 1e-12

    @pytest.mark.parametrize("a,b", [(0.5, 0.3), (0.5, -0.6), (0.5, 0.3 + 0.4j), (0.5, 0.0), (1j, -1j)])
    def test_endpoint_limits(self, a, b):
        """Test Xi_a(-t) Xi_b(t) against e^{+-i pi (b-a)/2} at |t| = 1e4."""
        for end in (1, -1):
            value = xi_cross(a, b, end * 1e4)
            assert abs(value / xi_cross_limit(a, b, end) - 1.0) < 1e-3

    def test_domain(self):
        """Test Re m <= -1 is rejected."""
        with pytest.raises(DomainError):
            xi(-1.2, 1.0)


class TestBesselDim1:
    """Tests for the dimension-1 Bessel family."""

    def test_half_order_elementary(self):
        """Test J = sin, Y = -cos, H+ = -i e^{iz}, I = sinh, K = e^{-z} at m = 1/2."""
        z = np.linspace(0.1, 20.0, 200)
        assert np.max(np.abs(bessel_dim1("J", 0.5, z) - np.sin(z))) < 1e-12
        assert np.max(np.abs(bessel_dim1("Y", 0.5, z) + np.cos(z))) < 1e-12
        assert np.max(np.abs(bessel_dim1("H_plus", 0.5, z) + 1j * np.exp(1j * z))) < 1e-12
        assert np.max(np.abs(bessel_dim1("K", 0.5, z) - np.exp(-z))) < 1e-12
        zs = np.linspace(0.1, 5.0, 50)
        assert np.max(np.abs(bessel_dim1("I", 0.5, zs) - np.sinh(zs))) < 1e-12

    def test_series_half_order_is_sine(self):
        """Test the power series backend at m = 1/2."""
        z = np.linspace(0.1, 10.0, 100)
        assert np.max(np.abs(bessel_dim1(BesselKind.J, 0.5, z, backend="series") - np.sin(z))) < 1e-10

    @pytest.mark.parametrize("kind", ["J", "Y", "I", "K", "H_plus", "H_minus"])
    @pytest.mark.parametrize("m", [0.3, -0.45, 0.0])
    def test_series_matches_scipy(self, kind, m):
        """Test the series backend against scipy for real orders."""
        z = np.linspace(0.5, 10.0, 40)
        series = bessel_dim1(kind, m, z, backend="series")
        reference = bessel_dim1(kind, m, z)
        scale = np.maximum(1.0, np.abs(reference))
        assert np.max(np.abs(series - reference) / scale) < 1e-10

    def test_complex_order_rotation(self):
        """Test J_m(ix) = e^{i pi m / 2} I_m(x) in dimension-1 form."""
        m = 0.3 + 0.4j
        x = np.linspace(0.5, 8.0, 16)
        lhs = bessel_dim1("J", m, 1j * x)
        rhs = cmath.exp(1j * np.pi / 4) * cmath.exp(1j * np.pi * m / 2) * bessel_dim1("I", m, x)
        assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-10

    def test_near_integer_complex_order(self):
        """Test the Y combination refuses orders too close to an integer."""
        with pytest.raises(NearIntegerOrderError):
            bessel_dim1("Y", 1e-8j, 1.0)

    def test_series_argument_cap(self):
        """Test the complex-order series rejects |z| > 30."""
        with pytest.raises(DomainError):
            bessel_dim1("J", 0.3 + 0.1j, 31.0)

    def test_unknown_kind(self):
        """Test unknown kinds raise DomainError."""
        with pytest.raises(DomainError):
            bessel_dim1("Q", 0.5, 1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
