"""Tests for sampled height, diameters, inradius and convexity."""

import math

import numpy as np
import pytest

from services.geometry import (
    CylinderDomain,
    ShapeCoefficients,
    ball_shape,
    boundary_sample,
    descriptors,
    height,
    inradius_diameter_check,
    is_convex_sampled,
)

COARSE = (31, 60)


@pytest.fixture
def peanut():
    """Axisymmetric shape r = 1 + 0.9 P_2(cos theta) with a waist at the equator."""
    coeffs = np.array([math.sqrt(4.0 * math.pi), 0.0, 0.9 / math.sqrt(5.0 / (4.0 * math.pi))])
    return ShapeCoefficients(coeffs, l_max=2, axisymmetric=True)


class TestDescriptors:
    def test_ball(self):
        d = descriptors(ball_shape(1.0, l_max=2), grid=COARSE)
        assert d.h == pytest.approx(2.0, rel=1e-12)
        assert d.R == pytest.approx(2.0, rel=1e-12)
        assert d.diam == pytest.approx(2.0, rel=1e-12)
        assert d.r_in == pytest.approx(1.0, abs=1e-2)

    def test_cylinder(self):
        d = descriptors(CylinderDomain(R=0.5, h=2.0), grid=COARSE)
        assert d.h == pytest.approx(2.0, rel=1e-12)
        assert d.R == pytest.approx(1.0, rel=1e-12)
        assert d.diam >= 2.0
        assert d.diam <= math.sqrt(5.0) + 1e-12
        assert d.r_in == pytest.approx(0.5, abs=2e-2)

    def test_height_matches_descriptors(self, peanut):
        assert height(peanut, grid=COARSE) == pytest.approx(3.8, rel=1e-12)

    def test_sample_lists_each_pole_once(self):
        sample = boundary_sample(ball_shape(1.0), grid=COARSE)
        assert sample.shape == (2 + 29 * 60, 3)

    def test_to_dict(self):
        d = descriptors(ball_shape(1.0), grid=COARSE)
        assert set(d.to_dict()) == {"h", "R", "diam", "r_in"}


class TestConvexity:
    def test_ball_is_convex(self):
        assert is_convex_sampled(ball_shape(1.0, l_max=2, axisymmetric=True))

    def test_waist_is_not_convex(self, peanut):
        assert not is_convex_sampled(peanut)

    @pytest.mark.slow
    def test_inradius_diameter_inequality_on_ball(self):
        check = inradius_diameter_check(ball_shape(1.0, l_max=2))
        assert check.convex
        assert check.holds
        assert check.volume == pytest.approx(4.0 * math.pi / 3.0, rel=1e-10)
        assert check.bound == pytest.approx(2.0 * math.pi / 3.0, rel=1e-2)
