#!/usr/bin/env python3
"""
Tests for Scattering Symbols and Resolvent Kernels
"""

import cmath
import math

import numpy as np
import pandas as pd
import pytest
import sys
from pathlib import Path

# Add scripts directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from scattering_symbols import (
    boundary_symbol,
    denominator,
    denominator_nu,
    denominator_ratio,
    denominator_roots,
    resolvent_kernel,
    resolvent_kernel_nu,
    smatrix,
    smatrix_nu,
    smatrix_plus,
    symbol_full,
    symbol_nu_full,
)
from model_parameters import ModelParams, NuParams, classify, exceptional_kappa, lambda_set, omega_set, varsigma
from special_functions import EULER_GAMMA, gamma, xi_cross
from levinson_errors import (
    SingularPointError,
    SpectralSingularityError,
    ValidationError,
    WrongAlgebraError,
)


@pytest.fixture
def plus_exceptional():
    """(m, kappa) exceptional for the plus sign only."""
    m = 0.3 + 0.4j
    return ModelParams(m=m, kappa=exceptional_kappa(m, "+"))


@pytest.fixture
def half_order():
    """m = 1/2, kappa = -1: one eigenvalue at -1."""
    return ModelParams(m=0.5, kappa=-1.0)


class TestSymbols:
    """Tests for Gamma^{+-} at finite points."""

    def test_zero_kappa_independent_of_x(self):
        """Test kappa = 0 gives a symbol in xi only."""
        p = ModelParams(m=0.3, kappa=0.0)
        values = symbol_full(p, "-", np.array([-5.0, 0.0, 5.0]), 1.2)
        expected = cmath.exp(-1j * math.pi * (0.3 - 0.5) / 2.0) * xi_cross(0.5, 0.3, 1.2)
        assert np.max(np.abs(values - expected)) < 1e-13

    def test_half_order_zero_kappa_is_one(self):
        """Test m = 1/2, kappa = 0 gives the identity symbol."""
        p = ModelParams(m=0.5, kappa=0.0)
        values = symbol_full(p, "+", np.linspace(-3, 3, 7), np.linspace(-20, 20, 7))
        assert np.max(np.abs(values - 1.0)) < 1e-12

    def test_scalar_return(self, half_order):
        """Test scalar inputs give a complex scalar."""
        assert isinstance(symbol_full(half_order, "-", 0.1, 0.2), complex)

    def test_bounded_for_real_parameters(self):
        """Test the symbol stays bounded on a grid for a non-exceptional real pair."""
        p = ModelParams(m=0.4, kappa=0.7)
        x, xi = np.meshgrid(np.linspace(-20, 20, 41), np.linspace(-20, 20, 41))
        values = symbol_full(p, "-", x, xi)
        assert np.all(np.isfinite(values))
        assert np.max(np.abs(values)) < 10.0

    def test_singular_point(self, plus_exceptional):
        """Test Gamma^- is singular on Lambda^+."""
        x = lambda_set(plus_exceptional, "+", (-60.0, 60.0))[0]
        with pytest.raises(SingularPointError):
            symbol_full(plus_exceptional, "-", x, 0.7)
        assert np.isfinite(symbol_full(plus_exceptional, "+", x, 0.7))

    def test_infinite_arguments_rejected(self, half_order):
        """Test infinite arguments are refused by the pointwise evaluator."""
        with pytest.raises(ValidationError):
            symbol_full(half_order, "-", np.inf, 0.0)

    def test_nu_singular_points(self):
        """Test the nu symbols are singular at x = Re nu - gamma on the matching sign."""
        plus = NuParams(nu=EULER_GAMMA + 1j * math.pi / 2)
        with pytest.raises(SingularPointError):
            symbol_nu_full(plus, "+", 0.0, 0.3)
        assert np.isfinite(symbol_nu_full(plus, "-", 0.0, 0.3))
        minus = NuParams(nu=EULER_GAMMA - 1j * math.pi / 2)
        with pytest.raises(SingularPointError):
            symbol_nu_full(minus, "-", 0.0, 0.3)


class TestScatteringMatrix:
    """Tests for S(x)."""

    def test_zero_kappa_constant(self):
        """Test S = e^{i pi (1/2 - m)} when kappa = 0."""
        m = 0.3 + 0.2j
        values = smatrix(ModelParams(m=m, kappa=0.0))(np.linspace(-4, 4, 9))
        assert np.max(np.abs(values - cmath.exp(1j * math.pi * (0.5 - m)))) < 1e-13

    def test_closed_form(self):
        """Test S against the closed form for complex m."""
        m, kappa = 0.3 + 0.4j, 1.5 - 0.5j
        p = ModelParams(m=m, kappa=kappa)
        s = varsigma(p)
        x = np.linspace(-3, 3, 13)
        t = s * np.exp(2 * m * x)
        expected = cmath.exp(1j * math.pi * (0.5 - m)) * (1 - t * cmath.exp(1j * math.pi * m)) \
            / (1 - t * cmath.exp(-1j * math.pi * m))
        assert np.max(np.abs(smatrix(p)(x) / expected - 1.0)) < 1e-10

    def test_plus_is_reciprocal(self):
        """Test S^+ = 1 / S."""
        p = ModelParams(m=0.3 + 0.4j, kappa=1.5 - 0.5j)
        x = np.linspace(-3, 3, 13)
        assert np.max(np.abs(smatrix(p)(x) * smatrix_plus(p)(x) - 1.0)) < 1e-10

    @pytest.mark.parametrize("n,kappa", [(1.0, 1.0), (0.5, 2.0), (2.0, 0.1 + 0.2j)])
    def test_periodic_form(self, n, kappa):
        """Test S_{in,kappa} = i e^{pi n} (1 - varsigma e^{-pi n} u) / (1 - varsigma e^{pi n} u), u = e^{2inx}."""
        p = ModelParams(m=1j * n, kappa=kappa)
        s = varsigma(p)
        x = np.linspace(0.0, 2 * math.pi / n, 25)
        u = np.exp(2j * n * x)
        expected = 1j * math.exp(math.pi * n) * (1 - s * math.exp(-math.pi * n) * u) \
            / (1 - s * math.exp(math.pi * n) * u)
        values = smatrix(p)(x)
        assert np.max(np.abs(values / expected - 1.0)) < 1e-10
        shifted = smatrix(p)(x + math.pi / n)
        assert np.max(np.abs(shifted / values - 1.0)) < 1e-10

    @pytest.mark.parametrize("p", [
        ModelParams(m=0.4, kappa=0.7),
        ModelParams(m=-0.6, kappa=-3.0),
        ModelParams(m=1j, kappa=cmath.exp(0.5j)),
    ])
    def test_unitary_when_self_adjoint(self, p):
        """Test |S(x)| = 1 for self-adjoint parameters."""
        assert classify(p).self_adjoint
        values = smatrix(p)(np.linspace(-6, 6, 49))
        assert np.max(np.abs(np.abs(values) - 1.0)) < 1e-10

    def test_nu_far_ends(self):
        """Test S^nu -> i at x -> +-inf."""
        s = smatrix_nu(NuParams(nu=0.3))
        assert abs(s(1e9) - 1j) < 1e-6
        assert abs(s(-1e9) - 1j) < 1e-6
        assert abs(abs(s(0.7)) - 1.0) < 1e-12

    def test_nu_zero(self):
        """Test S^nu vanishes at x = 0 when nu = gamma + i pi/2."""
        s = smatrix_nu(NuParams(nu=EULER_GAMMA + 1j * math.pi / 2))
        assert abs(s(0.0)) < 1e-12


class TestBoundarySymbol:
    """Tests for the four edges of the square."""

    def test_corners_match(self):
        """Test adjacent edges agree at the corners for random non-exceptional parameters."""
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 12:
            m = complex(rng.choice([-1, 1]) * rng.uniform(0.1, 0.9), rng.uniform(-0.5, 0.5))
            log_s = complex(rng.uniform(-3, 3), rng.uniform(-math.pi, math.pi))
            p = ModelParams(m=m, kappa=cmath.exp(log_s) * complex(gamma(m)) / complex(gamma(-m)))
            if classify(p).exceptional:
                continue
            b = boundary_symbol(p, "-")
            assert max(b.corner_residuals().values()) < 1e-3
            assert max(b.corner_limit_residuals().values()) < 1e-9
            checked += 1

    def test_nu_corners(self):
        """Test corner matching for the nu family."""
        b = boundary_symbol(NuParams(nu=0.3 + 0.4j), "-")
        assert max(b.corner_residuals().values()) < 1e-3

    def test_zero_kappa_edges(self):
        """Test kappa = 0 has equal xi-edges and a constant x-edge."""
        b = boundary_symbol(ModelParams(m=0.3, kappa=0.0), "-")
        xi = np.linspace(-50, 50, 11)
        assert np.max(np.abs(b.edge(1)(xi) - b.edge(3)(xi))) < 1e-13
        x = np.linspace(-1, 1, 5)
        assert np.max(np.abs(b.edge(2)(x) - cmath.exp(1j * math.pi * (0.5 - 0.3)))) < 1e-13
        assert np.max(np.abs(b.edge(4)(x) - 1.0)) < 1e-13

    def test_edge2_is_scattering_matrix(self, half_order):
        """Test the xi = -inf edge of the minus symbol is S(x)."""
        b = boundary_symbol(half_order, "-")
        x = np.linspace(-2, 2, 9)
        assert np.max(np.abs(b.edge(2)(x) - smatrix(half_order)(x))) < 1e-13

    def test_plus_edges(self, half_order):
        """Test the plus symbol has edge2 = 1 and edge4 = the plus S matrix."""
        b = boundary_symbol(half_order, "+")
        x = np.linspace(-2, 2, 9)
        assert np.max(np.abs(b.edge(2)(x) - 1.0)) < 1e-13
        assert np.max(np.abs(b.edge(4)(x) - smatrix_plus(half_order)(x))) < 1e-13

    def test_periodic_refused(self):
        """Test Re m = 0 belongs to the periodic algebra."""
        with pytest.raises(WrongAlgebraError):
            boundary_symbol(ModelParams(m=1j, kappa=1.0))

    def test_csv_export(self, half_order, tmp_path):
        """Test edge samples are written as CSV."""
        path = boundary_symbol(half_order, "-").to_csv(tmp_path / "edges.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["edge", "param", "re", "im"]
        assert set(frame["edge"]) == {"edge1", "edge2", "edge3", "edge4"}

    def test_to_dict(self, half_order):
        """Test the summary lists all four edges."""
        data = boundary_symbol(half_order, "+").to_dict()
        assert data["sign"] == "+"
        assert [e["name"] for e in data["edges"]] == ["edge1", "edge2", "edge3", "edge4"]


class TestResolventKernel:
    """Tests for the boundary values of the resolvent."""

    @pytest.mark.parametrize("sign,unit", [("+", 1), ("-", -1)])
    def test_dirichlet_half_order(self, sign, unit):
        """Test m = 1/2, kappa = 0 gives sin(k r<) e^{+-ik r>} / k."""
        p = ModelParams(m=0.5, kappa=0.0)
        k = 1.7
        for r, s in [(0.3, 1.1), (2.0, 0.5), (1.0, 1.0)]:
            value = resolvent_kernel(p, sign, k, r, s).value
            near, far = min(r, s), max(r, s)
            expected = math.sin(k * near) * cmath.exp(unit * 1j * k * far) / k
            assert abs(value - expected) < 1e-12

    def test_symmetric(self):
        """Test R(r, s) = R(s, r)."""
        p = ModelParams(m=0.3 + 0.2j, kappa=0.8 - 0.1j)
        a = resolvent_kernel(p, "-", 1.3, 0.4, 2.2).value
        b = resolvent_kernel(p, "-", 1.3, 2.2, 0.4).value
        assert a == b

    def test_radial_equation(self):
        """Test -R'' + ((m^2 - 1/4)/r^2 - k^2) R = 0 away from the diagonal."""
        m, k, s, h = 0.3, 1.3, 2.0, 1e-3
        p = ModelParams(m=m, kappa=0.5)
        for r in (0.7, 3.1):
            f = [resolvent_kernel(p, "+", k, r + d, s).value for d in (-h, 0.0, h)]
            second = (f[0] - 2 * f[1] + f[2]) / (h * h)
            residual = -second + ((m * m - 0.25) / (r * r) - k * k) * f[1]
            assert abs(residual) < 1e-5

    def test_unit_derivative_jump(self):
        """Test the r-derivative jumps by -1 across r = s."""
        p = ModelParams(m=0.3, kappa=0.5)
        k, s, h = 1.3, 1.0, 1e-6
        g = lambda r: resolvent_kernel(p, "+", k, r, s).value
        left = (g(s) - g(s - h)) / h
        right = (g(s + h) - g(s)) / h
        assert abs((right - left) + 1.0) < 1e-4

    def test_spectral_singularity(self, plus_exceptional):
        """Test the plus kernel refuses k in Omega^+."""
        k = omega_set(plus_exceptional, "+", (1e-12, 1e12)).momenta[0]
        with pytest.raises(SpectralSingularityError):
            resolvent_kernel(plus_exceptional, "+", k, 0.5, 1.0)

    def test_invalid_point(self, half_order):
        """Test non-positive k, r, s are rejected."""
        with pytest.raises(ValidationError):
            resolvent_kernel(half_order, "+", 1.0, 0.0, 1.0)

    def test_nu_kernel(self):
        """Test the nu kernel is symmetric and refuses its spectral singularity."""
        p = NuParams(nu=0.2 + 0.1j)
        a = resolvent_kernel_nu(p, "+", 0.9, 0.3, 1.7).value
        b = resolvent_kernel_nu(p, "+", 0.9, 1.7, 0.3).value
        assert a == b and np.isfinite(a)
        q = NuParams(nu=0.4 - 1j * math.pi / 2)
        k = 2.0 * math.exp(0.4 - EULER_GAMMA)
        assert abs(denominator_nu(q, "+", k)) < 1e-12
        with pytest.raises(SpectralSingularityError):
            resolvent_kernel_nu(q, "+", k, 0.5, 1.0)


class TestDenominatorRoots:
    """Tests for zeros of the resolvent denominator."""

    def test_roots_match_omega(self, plus_exceptional):
        """Test bracketed roots agree with the branch formula."""
        window = (1e-6, 1e6)
        roots = denominator_roots(plus_exceptional, "+", window)
        omega = omega_set(plus_exceptional, "+", window).momenta
        assert len(roots) == len(omega) == 1
        assert abs(roots[0] / omega[0] - 1.0) < 1e-8
        assert denominator_roots(plus_exceptional, "-", window) == []

    def test_no_roots_when_generic(self, half_order):
        """Test a non-exceptional pair has no roots."""
        assert denominator_roots(half_order, "+", (1e-6, 1e6)) == []
        assert denominator_roots(half_order, "-", (1e-6, 1e6)) == []

    @pytest.mark.parametrize("sign", ["+", "-"])
    def test_both_sign_roots_match_omega(self, sign):
        """Test a both-sign exceptional pair has one root per sign, matching Omega."""
        m = 0.5 + 0.5j
        p = ModelParams(m=m, kappa=exceptional_kappa(m, "both"))
        window = (1e-6, 1e6)
        roots = denominator_roots(p, sign, window)
        omega = omega_set(p, sign, window).momenta
        assert len(roots) == len(omega) == 1
        assert abs(roots[0] / omega[0] - 1.0) < 1e-8
        assert abs(denominator(p, sign, roots[0])) < 1e-8

    def test_both_sign_roots_are_distinct(self):
        """Test the two signs put their singular momenta at different places."""
        m = 0.5 + 0.5j
        p = ModelParams(m=m, kappa=exceptional_kappa(m, "both"))
        plus = denominator_roots(p, "+", (1e-6, 1e6))
        minus = denominator_roots(p, "-", (1e-6, 1e6))
        assert len(plus) == len(minus) == 1
        # the two branches differ by one turn, so Re w drops by 2 pi
        assert minus[0] / plus[0] == pytest.approx(math.exp(math.pi), rel=1e-8)

    def test_periodic_family(self):
        """Test the periodic exceptional family roots match Omega^- in a window."""
        p = ModelParams(m=1j, kappa=math.exp(math.pi))
        window = (1e-8, 1e8)
        roots = denominator_roots(p, "-", window)
        omega = omega_set(p, "-", window).momenta
        assert len(roots) == len(omega) >= 10
        assert np.allclose(roots, omega, rtol=1e-8)

    def test_denominator_vanishes(self, plus_exceptional):
        """Test the denominator is zero at the singular momentum."""
        k = omega_set(plus_exceptional, "+", (1e-12, 1e12)).momenta[0]
        assert abs(denominator(plus_exceptional, "+", k)) < 1e-10

    def test_ratio_is_finite(self, plus_exceptional):
        """Test |D(k)| / |k^2 - k_o^2| stays finite and nonzero near k_o."""
        k_o = omega_set(plus_exceptional, "+", (1e-12, 1e12)).momenta[0]
        ratios = denominator_ratio(plus_exceptional, "+", k_o)
        assert all(r > 0 for r in ratios)
        assert abs(ratios[-1] / ratios[0] - 1.0) < 0.1

    def test_window_validation(self, plus_exceptional):
        """Test the window must be positive and bounded."""
        with pytest.raises(ValidationError):
            denominator_roots(plus_exceptional, "+", (0.0, 1.0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
