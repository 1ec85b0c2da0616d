#!/usr/bin/env python3
"""
Tests for Adaptive Phase Tracking
"""

import numpy as np
import pytest
import sys
from pathlib import Path

# Add scripts directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from phase_tracking import adaptive_trace, stretched_grid
from levinson_errors import NotFredholmError


class TestStretchedGrid:
    """Tests for the sinh-stretched sampling grid."""

    def test_endpoints_and_order(self):
        """Test exact endpoints and strictly increasing samples."""
        grid = stretched_grid(-1e4, 1e4, 513, center=0.0, scale=1.0)
        assert grid[0] == -1e4 and grid[-1] == 1e4
        assert np.all(np.diff(grid) > 0)

    def test_dense_near_center(self):
        """Test spacing is smallest near the center."""
        grid = stretched_grid(-100.0, 100.0, 401, center=3.0, scale=0.5)
        steps = np.diff(grid)
        nearest = np.argmin(np.abs(grid[:-1] - 3.0))
        assert steps[nearest] < steps[0] / 10
        assert steps[nearest] < steps[-1] / 10


class TestAdaptiveTrace:
    """Tests for phase accumulation."""

    def test_unit_circle(self):
        """Test e^{it} over [0, 2 pi] turns once."""
        trace = adaptive_trace(lambda t: np.exp(1j * t), 0.0, 2 * np.pi, center=np.pi, scale=1.0)
        assert abs(trace.increment - 2 * np.pi) < 1e-10
        assert abs(trace.min_modulus - 1.0) < 1e-12

    def test_reverse_orientation(self):
        """Test e^{-3it} turns three times clockwise."""
        trace = adaptive_trace(lambda t: np.exp(-3j * t), 0.0, 2 * np.pi, center=np.pi, scale=1.0)
        assert abs(trace.increment + 6 * np.pi) < 1e-10

    def test_refinement(self):
        """Test fast rotation triggers refinement and still counts every turn."""
        trace = adaptive_trace(lambda t: np.exp(700j * t), 0.0, 2 * np.pi, center=np.pi, scale=10.0)
        assert trace.refinements >= 1
        assert abs(trace.increment / (2 * np.pi) - 700.0) < 1e-6
        assert trace.samples_used > 2049

    def test_limits_close_the_curve(self):
        """Test analytic end limits are included in the increment."""
        trace = adaptive_trace(lambda t: np.exp(1j * np.arctan(t)), -1e3, 1e3,
                               limit_lo=np.exp(-0.5j * np.pi), limit_hi=np.exp(0.5j * np.pi))
        assert abs(trace.increment - np.pi) < 1e-12

    def test_zero_on_path(self):
        """Test a zero on the contour raises NotFredholmError."""
        with pytest.raises(NotFredholmError):
            adaptive_trace(lambda t: (t - 0.5) + 0j, 0.0, 1.0)

    def test_pole_on_path(self):
        """Test a non-finite value raises NotFredholmError."""
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(NotFredholmError):
                adaptive_trace(lambda t: 1.0 / (t + 0j), 0.0, 1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
