"""Pairing-estimator tests: both routes must target log(p)/(p-1)."""

import math
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr

from padicdyn.errors import InvalidParameterError
from padicdyn.heights import average_height, height_limit
from padicdyn.pairing import (
    DECOMPOSITION,
    PULLBACK,
    PairingReport,
    az_decomposition_estimate,
    az_pullback_estimate,
    circle_average_green,
    orbit_sample,
    potential_consistency,
    unit_circle_sample,
)


class TestPullback:
    def test_base_point_one_equals_height(self):
        report = az_pullback_estimate(2, 2, (Fraction(1), Fraction(0)))
        h = average_height(2, 2)
        assert abs(report.estimate - h.avg_height) < 1e-12

    def test_generic_base_converges(self):
        report = az_pullback_estimate(2, 10)
        assert report.method == PULLBACK
        assert report.abs_error < 0.01

    def test_two_generic_bases_agree(self):
        a = az_pullback_estimate(2, 10)
        b = az_pullback_estimate(2, 10, (Fraction(-27, 100), Fraction(53, 100)))
        assert abs(a.estimate - b.estimate) < 0.02

    def test_p3_generic_base(self):
        report = az_pullback_estimate(3, 7)
        assert abs(report.estimate - math.log(3) / 2) < 0.01

    def test_parameters_recorded(self):
        report = az_pullback_estimate(3, 2)
        assert report.parameters["n"] == 2
        assert "base_point" in report.parameters
        assert report.target == height_limit(3)


class TestCircleAverage:
    @pytest.mark.parametrize("p,count", [(2, 64), (3, 1), (5, 128)])
    def test_identically_zero(self, p, count):
        assert circle_average_green(p, count) == 0.0

    def test_sample_on_circle(self):
        sample = unit_circle_sample(17, 128)
        assert len(sample) == 17
        with gmpy2.context(precision=128):
            for z in sample.points:
                assert abs(abs(z) - 1) < mpfr(2) ** -120

    def test_sample_count_validated(self):
        with pytest.raises(InvalidParameterError):
            unit_circle_sample(0)


class TestDecomposition:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_exact_value(self, p):
        report = az_decomposition_estimate(p, 64)
        assert report.method == DECOMPOSITION
        assert report.abs_error < 1e-12
        assert abs(report.estimate - math.log(p) / (p - 1)) < 1e-12

    def test_single_sample_same_value(self):
        # the circle term is identically zero, so M = 1 changes nothing
        assert (
            az_decomposition_estimate(2, 1).estimate
            == az_decomposition_estimate(2, 64).estimate
        )

    def test_certificates_present(self):
        report = az_decomposition_estimate(3, 8)
        assert report.certificates["padic_integral"].startswith("0")
        assert report.certificates["orbit_integral"].startswith("0")


class TestSymmetry:
    def test_both_routes_share_target(self):
        a = az_pullback_estimate(2, 4)
        b = az_decomposition_estimate(2, 16)
        assert a.target == b.target == height_limit(2)

    def test_two_method_agreement(self):
        a = az_pullback_estimate(2, 10)
        b = az_decomposition_estimate(2, 64)
        assert abs(a.estimate - b.estimate) < 0.02

    def test_estimates_nonnegative_enforced(self):
        with pytest.raises(InvalidParameterError):
            PairingReport(2, PULLBACK, -0.1, 0.7, 0.8)


class TestPotentialConsistency:
    def test_exterior_point(self):
        assert potential_consistency(2, 10, 5) < 1e-3

    def test_deviation_does_not_grow_with_depth(self):
        # at base point 1 the orbit potential telescopes exactly, so the
        # deviation sits at the escape-rate truncation floor for every n;
        # allow equality up to that floor's rounding
        d10 = potential_consistency(2, 10, 5)
        d11 = potential_consistency(2, 11, 5)
        assert d11 <= d10 + 1e-20

    def test_interior_point_rejected(self):
        with pytest.raises(InvalidParameterError):
            potential_consistency(2, 4, 1)


class TestOrbitSample:
    def test_leaf_count(self):
        sample = orbit_sample(3, 2)
        assert sample.kind == "backward-orbit"
        assert len(sample) == 9
