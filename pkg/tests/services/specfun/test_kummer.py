"""Tests for Kummer's confluent hypergeometric function."""

import math

import mpmath
import numpy as np
import pytest

from services.core.constants import KUMMER_ROUNDING_TOL
from services.core.exceptions import SpecFunAccuracyError, SpecFunDomainError
from services.specfun import (
    SpecFunAccuracy,
    kummer_m,
    kummer_m_derivative,
    kummer_m_weighted,
)


def reference(a, b, z, weighted=False):
    """Arbitrary-precision value of M(a, b, z), optionally times e^{-z/2}."""
    with mpmath.workdps(60):
        value = mpmath.hyp1f1(a, b, z)
        if weighted:
            value *= mpmath.exp(-mpmath.mpf(z) / 2)
        return float(value)


class TestKummerValues:
    def test_zero_argument_is_one(self):
        """The empty sum gives M(a, b, 0) = 1."""
        assert kummer_m(0.7, 1.3, 0.0) == 1.0

    def test_equal_parameters_give_exponential(self):
        """M(a, a, z) = e^z."""
        assert kummer_m(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)

    def test_terminating_series(self):
        """M(-1, 1, z) = 1 - z."""
        assert kummer_m(-1.0, 1.0, 2.0) == pytest.approx(-1.0, rel=1e-14)

    def test_matches_high_precision_series(self):
        """A case with alternating terms matches an mpmath reference."""
        assert kummer_m(-2.5, 1.0, 7.0) == pytest.approx(reference(-2.5, 1.0, 7.0), rel=1e-11)

    @pytest.mark.parametrize(
        "a,b,z",
        [(0.5, 1.0, 3.0), (-7.3, 3.0, 12.0), (2.0, 5.0, 40.0), (-0.25, 2.0, 60.0)],
    )
    def test_agrees_with_mpmath(self, a, b, z):
        """Scalar evaluations agree with mpmath across moderate arguments."""
        assert kummer_m(a, b, z) == pytest.approx(reference(a, b, z), rel=1e-10)

    def test_array_evaluation_matches_scalar(self):
        """Broadcast evaluation returns the same values as scalar calls."""
        a = np.array([[-3.5], [0.5], [1.5]])
        z = np.array([[0.0, 1.0, 10.0, 30.0]])
        values = kummer_m(a, 2.0, z)
        assert values.shape == (3, 4)
        for i in range(3):
            for j in range(4):
                assert values[i, j] == pytest.approx(kummer_m(float(a[i, 0]), 2.0, float(z[0, j])), rel=1e-12)


class TestKummerCancellation:
    @pytest.mark.parametrize("a,b,z", [(-150.3, 3.0, 400.0), (-180.7, 1.0, 450.0), (-40.2, 2.0, 30.0)])
    def test_alternating_series_with_huge_terms(self, a, b, z):
        """Sums far smaller than their largest term still match mpmath."""
        assert kummer_m(a, b, z) == pytest.approx(reference(a, b, z), rel=1e-10)

    def test_array_path_matches_mpmath_over_operating_range(self):
        rng = np.random.default_rng(5)
        a = rng.uniform(-200.0, 5.0, 25)
        b = rng.integers(1, 13, 25).astype(float)
        z = rng.uniform(0.0, 500.0, 25)
        values = kummer_m(a, b, z)
        expected = [reference(*args) for args in zip(a, b, z)]
        np.testing.assert_allclose(values, expected, rtol=10.0 * KUMMER_ROUNDING_TOL)

    def test_weighted_form_with_cancellation(self):
        """The arbitrary-precision fallback keeps the e^{-z/2} weight."""
        a, b, z = -60.5, 1.0, 200.0
        assert kummer_m_weighted(a, b, z) == pytest.approx(reference(a, b, z, weighted=True), rel=1e-10)


class TestKummerWeighted:
    def test_weighted_stays_finite_where_raw_value_is_huge(self):
        """e^{-z/2} M stays finite and accurate for large z."""
        z = 650.0
        value = kummer_m_weighted(0.5, 2.0, z)
        assert np.isfinite(value)
        assert value == pytest.approx(reference(0.5, 2.0, z, weighted=True), rel=1e-9)

    def test_power_weight(self):
        """The z^w factor is applied on top of the exponential weight."""
        z = 3.0
        expected = math.exp(-z / 2) * z**1.5 * kummer_m(0.5, 2.0, z)
        assert kummer_m_weighted(0.5, 2.0, z, 1.5) == pytest.approx(expected, rel=1e-12)

    def test_zero_power_at_origin(self):
        """z^0 is one at z = 0."""
        assert kummer_m_weighted(0.5, 2.0, 0.0, 0.0) == 1.0


class TestKummerIdentities:
    @pytest.mark.parametrize("a_lo, z_hi", [(-10.0, 10.0), (-200.0, 500.0)])
    def test_contiguous_relation(self, a_lo, z_hi):
        """M(a,b,z) = M(a-1,b,z) + (z/b) M(a,b+1,z) on seeded random arguments."""
        rng = np.random.default_rng(11)
        for _ in range(40):
            a = rng.uniform(a_lo, 5.0)
            b = float(rng.integers(1, 13))
            z = rng.uniform(0.0, z_hi)
            lhs = kummer_m(a, b, z)
            first = kummer_m(a - 1.0, b, z)
            second = (z / b) * kummer_m(a, b + 1.0, z)
            scale = abs(lhs) + abs(first) + abs(second)
            assert abs(lhs - first - second) <= 10.0 * KUMMER_ROUNDING_TOL * scale

    def test_derivative_matches_finite_difference(self):
        """d/dz M = (a/b) M(a+1, b+1, z)."""
        a, b, z, h = -3.7, 2.0, 4.2, 1e-5
        central = (kummer_m(a, b, z + h) - kummer_m(a, b, z - h)) / (2 * h)
        assert kummer_m_derivative(a, b, z) == pytest.approx(central, rel=1e-6)


class TestKummerErrors:
    @pytest.mark.parametrize("b", [0.0, -1.0, -4.0])
    def test_non_positive_integer_b(self, b):
        """b in {0, -1, -2, ...} is outside the domain."""
        with pytest.raises(SpecFunDomainError):
            kummer_m(0.5, b, 1.0)

    def test_negative_argument(self):
        """Only z >= 0 is supported."""
        with pytest.raises(SpecFunDomainError):
            kummer_m(0.5, 1.0, -1.0)

    def test_non_convergence_carries_partial_estimate(self):
        """A tiny term budget raises an accuracy error with the partial sum."""
        accuracy = SpecFunAccuracy(rel_tol=1e-14, max_terms=100)
        with pytest.raises(SpecFunAccuracyError) as exc_info:
            kummer_m(0.5, 1.0, 200.0, accuracy)
        assert exc_info.value.partial_estimate is not None

    @pytest.mark.parametrize("rel_tol,max_terms", [(0.0, 500), (1e-3, 500), (1e-10, 50)])
    def test_invalid_accuracy_settings(self, rel_tol, max_terms):
        """rel_tol must lie in (0, 1e-6] and max_terms be at least 100."""
        with pytest.raises(SpecFunDomainError):
            SpecFunAccuracy(rel_tol=rel_tol, max_terms=max_terms)
