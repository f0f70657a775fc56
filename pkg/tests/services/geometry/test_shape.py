"""Tests for harmonic shape descriptions and the exact cylinder domain."""

import math

import numpy as np
import pytest

from services.core.exceptions import ConfigError, GeometryError, InadmissibleShapeError
from services.geometry import (
    CylinderDomain,
    ShapeCoefficients,
    ball_shape,
    perturbed_ball,
    prolate_shape,
    oblate_shape,
    surface_frame,
    unit_volume_ball,
)
from services.specfun import harmonic_count

SQRT_4PI = math.sqrt(4.0 * math.pi)


@pytest.fixture
def angles():
    rng = np.random.default_rng(3)
    return np.arccos(rng.uniform(-1, 1, 40)), rng.uniform(0, 2 * math.pi, 40)


class TestShapeCoefficients:
    def test_ball_radius_is_constant(self, angles):
        """A ball only carries the constant harmonic."""
        theta, phi = angles
        c = ball_shape(1.7, l_max=4)
        np.testing.assert_allclose(c.radius(theta, phi), 1.7, rtol=1e-14)
        assert c.n_coeffs == harmonic_count(4)

    def test_axisymmetric_ball(self, angles):
        """Zonal coefficients describe the same ball."""
        theta, phi = angles
        c = ball_shape(0.8, l_max=6, axisymmetric=True)
        assert c.n_coeffs == 7
        np.testing.assert_allclose(c.radius(theta, phi), 0.8, rtol=1e-14)

    def test_wrong_coefficient_count(self):
        """The coefficient vector must match l_max."""
        with pytest.raises(GeometryError):
            ShapeCoefficients(np.ones(5), l_max=1)

    def test_non_finite_coefficients(self):
        with pytest.raises(GeometryError):
            ShapeCoefficients(np.array([np.nan]), l_max=0)

    def test_negative_radius_is_inadmissible(self):
        """Shapes with r <= 0 somewhere are rejected at construction."""
        with pytest.raises(InadmissibleShapeError):
            ShapeCoefficients(np.array([-1.0]), l_max=0)

    def test_inadmissible_is_a_geometry_error(self):
        assert issubclass(InadmissibleShapeError, GeometryError)

    def test_coefficients_are_read_only(self):
        c = ball_shape(1.0, l_max=2)
        with pytest.raises(ValueError):
            c.coeffs[0] = 2.0

    def test_general_and_axisymmetric_views_agree(self, angles):
        """Embedding zonal coefficients and projecting back preserves the radius."""
        theta, phi = angles
        zonal = perturbed_ball(4, 0.1, seed=5, axisymmetric=True)
        general = zonal.to_general()
        assert not general.axisymmetric
        np.testing.assert_allclose(general.radius(theta, phi), zonal.radius(theta, phi), rtol=1e-12)
        back = general.to_axisymmetric()
        np.testing.assert_allclose(back.coeffs, zonal.coeffs)

    def test_to_axisymmetric_pads_and_truncates(self):
        zonal = perturbed_ball(3, 0.05, seed=1, axisymmetric=True)
        padded = zonal.to_axisymmetric(l_max=6)
        assert padded.l_max == 6
        np.testing.assert_allclose(padded.coeffs[:4], zonal.coeffs)
        np.testing.assert_allclose(padded.coeffs[4:], 0.0)
        truncated = zonal.to_axisymmetric(l_max=1)
        np.testing.assert_allclose(truncated.coeffs, zonal.coeffs[:2])

    def test_scaled(self, angles):
        theta, phi = angles
        c = perturbed_ball(3, 0.1, seed=2)
        np.testing.assert_allclose(c.scaled(2.0).radius(theta, phi), 2.0 * c.radius(theta, phi))

    def test_dict_round_trip(self):
        c = perturbed_ball(2, 0.1, seed=4)
        restored = ShapeCoefficients.from_dict(c.to_dict())
        np.testing.assert_array_equal(restored.coeffs, c.coeffs)
        assert restored.l_max == c.l_max
        assert restored.axisymmetric == c.axisymmetric

    def test_from_dict_rejects_unknown_keys(self):
        """Shape files with extra keys are configuration errors."""
        data = ball_shape().to_dict()
        data["radius"] = 1.0
        with pytest.raises(ConfigError):
            ShapeCoefficients.from_dict(data)

    def test_from_dict_requires_coefficients(self):
        with pytest.raises(ConfigError):
            ShapeCoefficients.from_dict({"l_max": 0})

    def test_contains(self):
        c = ball_shape(1.0)
        inside = c.contains(np.array([[0.0, 0.0, 0.0], [0.5, 0.1, -0.2], [1.5, 0.0, 0.0]]))
        assert inside.tolist() == [True, True, False]

    def test_radius_derivatives_match_finite_differences(self):
        c = perturbed_ball(4, 0.1, seed=7)
        theta, phi, step = np.array([0.7, 2.1]), np.array([0.3, 4.0]), 1e-6
        _, r_theta, r_phi = c.radius_derivatives(theta, phi)
        fd_theta = (c.radius(theta + step, phi) - c.radius(theta - step, phi)) / (2 * step)
        fd_phi = (c.radius(theta, phi + step) - c.radius(theta, phi - step)) / (2 * step)
        np.testing.assert_allclose(r_theta, fd_theta, atol=1e-7)
        np.testing.assert_allclose(r_phi, fd_phi, atol=1e-7)


class TestSurfaceFrame:
    def test_sphere_frame(self):
        """On a sphere the normal is radial and dsigma = r^2 sin(theta)."""
        theta = np.array([0.3, 1.2, 2.5])
        phi = np.array([0.1, 3.0, 5.5])
        c = ball_shape(2.0, l_max=2)
        normals, area = surface_frame(c, theta, phi)
        expected = np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
        )
        np.testing.assert_allclose(normals, expected, atol=1e-13)
        np.testing.assert_allclose(area, 4.0 * np.sin(theta), rtol=1e-13)


class TestShapeFactories:
    def test_unit_volume_ball_radius(self):
        c = unit_volume_ball()
        assert c.coeffs[0] / SQRT_4PI == pytest.approx((3 / (4 * math.pi)) ** (1 / 3))

    def test_prolate_is_elongated_along_the_axis(self):
        """Semi-axes (1, 1, aspect) are recovered at the poles and the equator."""
        c = prolate_shape(1.5, l_max=10)
        assert c.radius(0.0, 0.0) == pytest.approx(1.5, rel=5e-3)
        assert c.radius(math.pi / 2, 1.0) == pytest.approx(1.0, rel=5e-3)

    def test_oblate_is_flattened(self):
        c = oblate_shape(0.7, l_max=10, axisymmetric=True)
        assert c.radius(math.pi, 0.0) == pytest.approx(0.7, rel=5e-3)
        assert c.axisymmetric

    def test_spheroid_aspect_checks(self):
        with pytest.raises(GeometryError):
            prolate_shape(0.9)
        with pytest.raises(GeometryError):
            oblate_shape(1.2)

    def test_perturbation_amplitude(self):
        """The noise has root-mean-square amplitude * radius over the sphere."""
        c = perturbed_ball(4, 0.1, seed=11, radius_value=2.0)
        noise = np.linalg.norm(c.coeffs[1:]) / SQRT_4PI
        assert noise == pytest.approx(0.2, rel=1e-12)
        assert c.coeffs[0] == pytest.approx(2.0 * SQRT_4PI)

    def test_perturbation_is_seeded(self):
        a = perturbed_ball(3, 0.1, seed=9)
        b = perturbed_ball(3, 0.1, seed=9)
        np.testing.assert_array_equal(a.coeffs, b.coeffs)

    def test_perturbation_degree_bound(self):
        with pytest.raises(GeometryError):
            perturbed_ball(5, 0.1, l_max=3)


class TestCylinderDomain:
    def test_radius_on_side_and_caps(self):
        c = CylinderDomain(R=0.5, h=3.0)
        assert c.radius(math.pi / 2, 0.0) == pytest.approx(0.5)
        assert c.radius(0.0, 0.0) == pytest.approx(1.5)
        assert c.radius(math.pi, 2.0) == pytest.approx(1.5)

    def test_volume(self):
        assert CylinderDomain(R=2.0, h=0.5).volume == pytest.approx(2.0 * math.pi)

    def test_invalid_dimensions(self):
        with pytest.raises(GeometryError):
            CylinderDomain(R=0.0, h=1.0)
