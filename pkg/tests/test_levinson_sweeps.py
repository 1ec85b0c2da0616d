#!/usr/bin/env python3
"""
Tests for Parameter Sweeps
"""

import math

import numpy as np
import pandas as pd
import pytest
import sys
from pathlib import Path

# Add scripts directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from levinson_sweeps import (
    count_bounds_sweep,
    fredholm_sweep,
    periodic_kappas,
    periodic_sweep,
    sample_model_params,
    sample_nu_params,
    save_frame,
)
from model_parameters import classify


class TestSampling:
    """Tests for stratified parameter samples."""

    def test_model_sample(self):
        """Test samples are non-exceptional and cover both signs of Re m."""
        samples = sample_model_params(60, np.random.default_rng(2))
        assert len(samples) == 60
        assert not any(classify(p).exceptional for p in samples)
        assert any(p.m.real > 0 for p in samples) and any(p.m.real < 0 for p in samples)
        assert all(0 < abs(p.m.real) < 1 for p in samples)

    def test_nu_sample(self):
        """Test nu samples alternate inside and outside the strip."""
        samples = sample_nu_params(10, np.random.default_rng(2))
        inside = [abs(p.nu.imag) < math.pi / 2 for p in samples]
        assert inside == [True, False] * 5

    def test_periodic_kappas_cross_thresholds(self):
        """Test the kappa sweep hits |kappa| = e^{+-pi n} exactly."""
        ratios = [math.log(abs(k)) / (math.pi * 2.0) for k in periodic_kappas(2.0)]
        assert any(abs(r - 1.0) < 1e-12 for r in ratios)
        assert any(abs(r + 1.0) < 1e-12 for r in ratios)


class TestSweeps:
    """Tests for the index identity sweeps."""

    def test_fredholm_sweep(self):
        """Test winding equals count on 200 (m, kappa) and 50 nu."""
        frame = fredholm_sweep(count_m=200, count_nu=50, seed=0)
        assert len(frame) == 250
        assert (frame["status"] == "pass").all(), frame[frame["status"] != "pass"]
        assert (frame["winding"] == frame["count"]).all()
        nu_rows = frame[frame["family"] == "H_0nu"]
        assert len(nu_rows) == 50
        inside = nu_rows["nu_im"].abs() < math.pi / 2
        assert (nu_rows.loc[inside, "winding"] == 1).all()
        assert (nu_rows.loc[~inside, "winding"] == 0).all()

    def test_periodic_sweep(self):
        """Test winding is -1 exactly inside the strip, with refusals on its edges."""
        frame = periodic_sweep()
        assert len(frame) == 39
        edge = np.isclose(frame["log_ratio"].abs(), math.pi, rtol=1e-9)
        assert (frame.loc[edge, "status"] == "refused").all()
        assert edge.sum() == 6
        rest = frame[~edge]
        assert (rest["status"] == "pass").all()
        inside = rest["log_ratio"].abs() < math.pi
        assert (rest.loc[inside, "winding"] == -1).all()
        assert (rest.loc[~inside, "winding"] == 0).all()
        assert np.allclose(rest.loc[inside, "trace"], 1.0, atol=1e-10)

    def test_count_bounds_sweep(self):
        """Test 1000 enumerated counts all lie within their bounds."""
        frame = count_bounds_sweep(count=1000, seed=0)
        assert len(frame) == 1000
        assert frame["within"].all()
        assert set(frame["bound_kind"]) >= {"range", "infinite", "zero"}

    def test_save_frame(self, tmp_path):
        """Test sweep frames are written as CSV."""
        frame = pd.DataFrame({"n": [1.0], "winding": [-1], "status": ["pass"]})
        path = save_frame(frame, tmp_path / "sweeps" / "periodic.csv")
        assert path.exists()
        assert pd.read_csv(path).equals(frame)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
