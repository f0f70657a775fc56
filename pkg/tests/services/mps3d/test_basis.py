"""Tests for the magnetic particular solutions and the basis index set."""

import numpy as np
import pytest

from services.core.constants import KUMMER_GROWTH_CAP
from services.core.exceptions import ConfigError, DomainError
from services.core.interfaces import CylindricalPoints
from services.mps3d import (
    BasisSpec,
    BesselBasis,
    KummerBasis,
    bessel_basis,
    particular_solution,
    particular_solution_gradient,
)
from services.specfun import kummer_m_weighted

STEP = 1e-3
OFFSETS = np.eye(3) * STEP


def to_cylindrical(points):
    return np.stack(
        [np.hypot(points[:, 0], points[:, 1]), np.arctan2(points[:, 1], points[:, 0]), points[:, 2]],
        axis=-1,
    )


def magnetic_residual(func, points, lam, b_field):
    """(-i grad + A)^2 f - lambda f with A = (B/2)(-y, x, 0), by central differences."""
    center = func(points)
    laplacian = np.zeros_like(center)
    gradient = np.zeros(center.shape + (3,), dtype=complex)
    for k in range(3):
        plus, minus = func(points + OFFSETS[k]), func(points - OFFSETS[k])
        laplacian += (plus - 2.0 * center + minus) / STEP**2
        gradient[:, k] = (plus - minus) / (2.0 * STEP)
    potential = 0.5 * b_field * np.stack(
        [-points[:, 1], points[:, 0], np.zeros(len(points))], axis=-1
    )
    a_dot_grad = np.einsum("ik,ik->i", potential, gradient)
    a_squared = np.sum(potential**2, axis=1)
    return -laplacian - 2j * a_dot_grad + a_squared * center - lam * center


@pytest.fixture
def sample_points():
    rng = np.random.default_rng(12)
    return rng.uniform(-0.6, 0.6, size=(12, 3))


class TestParticularSolution:
    @pytest.mark.parametrize("l, p", [(0, 0.0), (1, 0.7), (-2, 1.3), (3, -0.4)])
    def test_solves_the_magnetic_equation(self, l, p, sample_points):
        lam, b_field = 9.0, 2.0

        def psi(points):
            return particular_solution(l, p, lam, b_field, to_cylindrical(points))

        residual = magnetic_residual(psi, sample_points, lam, b_field)
        scale = np.max(np.abs(lam * psi(sample_points)))
        assert np.max(np.abs(residual)) < 1e-4 * scale

    def test_gradient_matches_finite_differences(self):
        l, p, lam, b_field = 2, 0.5, 12.0, 3.0
        point = np.array([0.4, 0.9, -0.3])
        grad = particular_solution_gradient(l, p, lam, b_field, point)
        h = 1e-6
        shifts = np.eye(3) * h
        fd = [
            (particular_solution(l, p, lam, b_field, point + shifts[k])
             - particular_solution(l, p, lam, b_field, point - shifts[k])) / (2 * h)
            for k in range(3)
        ]
        fd[1] = fd[1] / point[0]
        np.testing.assert_allclose(grad, fd, rtol=1e-6, atol=1e-9)

    def test_regular_at_the_axis(self):
        """Columns with l != 0 vanish on the field axis."""
        assert particular_solution(2, 0.3, 5.0, 1.0, [0.0, 0.0, 0.2]) == 0.0
        assert abs(particular_solution(0, 0.3, 5.0, 1.0, [0.0, 0.0, 0.2])) > 0

    def test_scalar_and_batch_evaluation(self):
        points = np.array([[0.1, 0.0, 0.0], [0.5, 1.0, 0.2]])
        batch = particular_solution(1, 0.2, 4.0, 1.5, points)
        assert batch.shape == (2,)
        assert batch[1] == pytest.approx(particular_solution(1, 0.2, 4.0, 1.5, points[1]))

    def test_needs_positive_field(self):
        with pytest.raises(DomainError):
            particular_solution(0, 0.0, 1.0, 0.0, [0.1, 0.0, 0.0])

    def test_rejects_negative_radius(self):
        with pytest.raises(DomainError):
            particular_solution(0, 0.0, 1.0, 1.0, [-0.1, 0.0, 0.0])


class TestBesselBasis:
    def test_solves_helmholtz(self, sample_points):
        lam = 7.5

        def psi(points):
            return bessel_basis(1, 0.9, lam, to_cylindrical(points))

        residual = magnetic_residual(psi, sample_points, lam, 0.0)
        assert np.max(np.abs(residual)) < 1e-4 * np.max(np.abs(lam * psi(sample_points)))

    def test_rejects_evanescent_waves(self):
        with pytest.raises(DomainError):
            bessel_basis(0, 3.0, 4.0, [0.1, 0.0, 0.0])

    def test_admissible_wave_numbers(self):
        mask = BesselBasis().admissible_p(np.array([-3.0, -1.0, 0.0, 2.0]), 4.0)
        assert mask.tolist() == [False, True, True, True]
        assert KummerBasis().admissible_p(np.array([-3.0, 5.0]), 1.0).all()

    def test_kummer_columns_beyond_the_growth_cap_are_dropped(self):
        """Fast-growing evanescent columns go; the oscillatory and mildly growing ones stay."""
        lam, B, r_max = 70.0, 50.0, 0.62
        basis = BasisSpec.axisymmetric_default()
        l_values, p_values = basis.columns(lam)
        keep = KummerBasis().resolvable(l_values, p_values, lam, B, r_max)
        assert keep[basis.n_p]
        assert not keep[0] and not keep[-1]
        np.testing.assert_array_equal(keep, keep[::-1])
        a = 0.5 * (1.0 - (lam - p_values[keep] ** 2) / B)
        growth = np.abs(kummer_m_weighted(a, 1.0, 0.5 * B * r_max**2))
        assert np.all(growth <= KUMMER_GROWTH_CAP)

    def test_bessel_columns_are_always_resolvable(self):
        p_values = np.array([-1.0, 0.0, 1.0])
        assert BesselBasis().resolvable(np.zeros(3, dtype=int), p_values, 4.0, 0.0, 10.0).all()

    def test_kummer_family_needs_field(self):
        points = CylindricalPoints.from_cartesian(np.array([[0.1, 0.2, 0.3]]))
        with pytest.raises(DomainError):
            KummerBasis().evaluate([0], [0.0], 1.0, 0.0, points)


class TestBasisSpec:
    def test_general_columns(self):
        basis = BasisSpec.general(n_l=2, n_p=3)
        l_values, p_values = basis.columns(16.0)
        assert basis.size == 5 * 7 == l_values.size
        assert sorted(set(l_values.tolist())) == [-2, -1, 0, 1, 2]
        assert basis.delta_p(16.0) == pytest.approx(1.0)
        assert np.max(p_values) == pytest.approx(3.0)

    def test_axisymmetric_columns(self):
        basis = BasisSpec.axisymmetric_default()
        l_values, _ = basis.columns(9.0)
        assert basis.axisymmetric
        assert set(l_values.tolist()) == {0}
        assert basis.size == 2 * basis.n_p + 1

    def test_field_free_spacing_is_capped(self):
        """Without field every index stays oscillatory, so no column is lost to p^2 > lambda."""
        basis = BasisSpec.axisymmetric_default(b_zero_mode=True)
        _, p_values = basis.columns(16.0)
        assert basis.delta_p(16.0) == pytest.approx(4.0 / (basis.n_p + 1))
        assert BesselBasis().admissible_p(p_values, 16.0).all()
        assert BasisSpec.axisymmetric_default().delta_p(16.0) == pytest.approx(40.0 / (basis.n_p + 1))

    def test_snapshot_records_spacing(self):
        snapshot = BasisSpec.general(n_p=4).snapshot(25.0)
        assert snapshot.dp == pytest.approx(1.0)

    def test_dict_round_trip(self):
        basis = BasisSpec.axisymmetric_default(n_p=10).snapshot(4.0)
        assert BasisSpec.from_dict(basis.to_dict()) == basis

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            BasisSpec.from_dict({"n_l": 1, "width": 2})

    @pytest.mark.parametrize("overrides", [{"n_l": -1}, {"n_p": 0}, {"dp_multiplier": 0.0}])
    def test_validation(self, overrides):
        with pytest.raises(ConfigError):
            BasisSpec(**overrides)
