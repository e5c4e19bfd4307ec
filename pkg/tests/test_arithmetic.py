"""Exact-layer tests: phi_p construction, iteration, and the monic model F_n.

Derived expectations used below were computed by hand:

  phi_2^2(x) = ((u^2 - u)/2 at u = (x^2 - x)/2) = (x^4 - 2x^3 - x^2 + 2x)/8
  F_1(p=2)   = 2*(phi_2 - 1) = x^2 - x - 2 = (x - 2)(x + 1)
  F_2(p=2)   = 8*(phi_2^2 - 1) = x^4 - 2x^3 - x^2 + 2x - 8
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn.arithmetic import (
    IntPoly,
    RationalPoly,
    _int_mul,
    denominator_exponent,
    eval_poly,
    integral_model,
    is_prime,
    iterate_poly,
    phi_step_poly,
)
from padicdyn.errors import InvalidParameterError, ResourceLimitError

F = Fraction


class TestPhiStepPoly:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_shape(self, p):
        phi = phi_step_poly(p)
        assert phi.degree == p
        assert phi.coeffs[p] == F(1, p)
        assert phi.coeffs[1] == F(-1, p)
        assert all(c == 0 for i, c in enumerate(phi.coeffs) if i not in (1, p))

    def test_p2_explicit(self):
        assert phi_step_poly(2) == RationalPoly([0, F(-1, 2), F(1, 2)])

    @pytest.mark.parametrize("bad", [0, 1, 4, 6, 9, -3])
    def test_rejects_non_prime(self, bad):
        with pytest.raises(InvalidParameterError):
            phi_step_poly(bad)


class TestIteratePoly:
    def test_zero_iterations_is_identity(self):
        assert iterate_poly(phi_step_poly(2), 0) == RationalPoly.identity()

    def test_phi2_squared_coefficients(self):
        expect = RationalPoly([0, F(1, 4), F(-1, 8), F(-1, 4), F(1, 8)])
        assert iterate_poly(phi_step_poly(2), 2) == expect

    def test_phi2_squared_at_minus_one(self):
        # -1 -> 1 -> 0 under phi_2
        assert iterate_poly(phi_step_poly(2), 2)(-1) == 0

    def test_degree_cap_error_names_cap(self):
        with pytest.raises(ResourceLimitError, match="65536"):
            iterate_poly(phi_step_poly(2), 17)

    def test_negative_count_rejected(self):
        with pytest.raises(InvalidParameterError):
            iterate_poly(phi_step_poly(2), -1)

    @pytest.mark.parametrize("p,m,n", [(2, 1, 2), (2, 2, 1), (3, 1, 1), (2, 2, 2)])
    def test_semigroup_at_random_points(self, p, m, n):
        rng = random.Random(1729 + p + 10 * m + 100 * n)
        phi = phi_step_poly(p)
        f_mn = iterate_poly(phi, m + n)
        f_m = iterate_poly(phi, m)
        f_n = iterate_poly(phi, n)
        for _ in range(10):
            x = F(rng.randint(-50, 50), rng.randint(1, 20))
            assert f_mn(x) == f_m(f_n(x))

    @pytest.mark.parametrize("p", [2, 3, 5])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_one_is_strictly_preperiodic(self, p, n):
        # 1 -> 0 -> 0 -> ..., so every iterate kills 1
        if p ** n > 200:
            pytest.skip("keep the exact path small")
        assert eval_poly(iterate_poly(phi_step_poly(p), n), 1) == 0


class TestIntegralModel:
    def test_p2_n1(self):
        assert integral_model(2, 1) == IntPoly([-2, -1, 1])

    def test_p2_n2(self):
        assert integral_model(2, 2) == IntPoly([-8, 2, -1, -2, 1])

    def test_p3_n2_constant_term(self):
        assert integral_model(3, 2).coeffs[0] == -81

    @pytest.mark.parametrize("p,n_max", [(2, 8), (3, 5), (5, 3)])
    def test_monic_integral_degree_constant(self, p, n_max):
        for n in range(1, n_max + 1):
            f = integral_model(p, n)
            assert f.is_monic
            assert f.degree == p ** n
            assert f.coeffs[0] == -(p ** denominator_exponent(p, n))
            assert all(isinstance(c, int) for c in f.coeffs)

    @pytest.mark.parametrize("p,n_max", [(2, 4), (3, 4)])
    def test_denominator_clearing_matches_iterates(self, p, n_max):
        # independent route: scale the exact Fraction iterate by p^(e_n)
        phi = phi_step_poly(p)
        for n in range(1, n_max + 1):
            scale = p ** denominator_exponent(p, n)
            f_exact = iterate_poly(phi, n).scale(scale) - RationalPoly([scale])
            assert all(c.denominator == 1 for c in f_exact.coeffs)
            assert f_exact == integral_model(p, n).to_rational()

    @pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 1)])
    def test_compatibility_at_random_rationals(self, p, n):
        rng = random.Random(9000 + 7 * p + n)
        phi_n = iterate_poly(phi_step_poly(p), n)
        f_n = integral_model(p, n)
        scale = p ** denominator_exponent(p, n)
        for _ in range(20):
            x = F(rng.randint(-40, 40), rng.randint(1, 15))
            assert scale * (phi_n(x) - 1) == eval_poly(f_n, x)

    def test_degree_cap(self):
        with pytest.raises(ResourceLimitError, match="cap"):
            integral_model(2, 17)

    def test_coeff_bit_cap(self):
        with pytest.raises(ResourceLimitError, match="bits"):
            integral_model(2, 10, coeff_bit_cap=100)

    def test_rejects_bad_n(self):
        with pytest.raises(InvalidParameterError):
            integral_model(2, 0)


class TestEvalPoly:
    def test_f1_root_at_two(self):
        assert eval_poly(integral_model(2, 1), 2) == 0

    def test_phi2_kills_zero_and_one(self):
        phi = phi_step_poly(2)
        assert eval_poly(phi, 1) == 0
        assert eval_poly(phi, 0) == 0

    def test_rational_argument(self):
        assert eval_poly(phi_step_poly(2), F(1, 2)) == F(-1, 8)


class TestPolyBasics:
    def test_trailing_zeros_stripped(self):
        assert RationalPoly([1, 2, 0, 0]).degree == 1
        assert IntPoly([0, 0]).degree == -1

    def test_zero_poly_has_no_leading(self):
        with pytest.raises(InvalidParameterError):
            RationalPoly().leading

    def test_compose_horner(self):
        f = RationalPoly([1, 0, 1])  # x^2 + 1
        g = RationalPoly([0, 2])     # 2x
        assert f.compose(g) == RationalPoly([1, 0, 4])


def _naive_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(min_value=-(10 ** 30), max_value=10 ** 30), min_size=33, max_size=70),
    st.lists(st.integers(min_value=-(10 ** 30), max_value=10 ** 30), min_size=33, max_size=70),
)
def test_packed_product_matches_schoolbook(a, b):
    # exercises the Kronecker path (lengths above the schoolbook cutoff)
    assert _int_mul(a, b) == _naive_mul(a, b)


@given(st.integers(min_value=-10, max_value=300))
def test_is_prime_matches_factor_search(n):
    naive = n >= 2 and all(n % d for d in range(2, n))
    assert is_prime(n) == naive
