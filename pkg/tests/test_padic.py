"""p-adic fiber tests.

The depth-2 orbit for p=2 is cross-checked against an independent oracle:
exhaustive search for roots of x^4 - 2x^3 - x^2 + 2x - 8 modulo 2^12
followed by greedy digit-by-digit lifting to 2^24 (valid because the
derivative is odd at every root), sharing no code with the Hensel module.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn.errors import (
    InvalidParameterError,
    PrecisionViolationError,
    ResourceLimitError,
)
from padicdyn.padic import (
    PadicNumber,
    PadicOrbit,
    backward_orbit_padic,
    orbit_rows,
    padic_add,
    padic_div_unit,
    padic_from_int,
    padic_mul,
    padic_preimages,
    phi_forward,
    verify_total_splitting,
)


class TestRingOps:
    def test_mul_small_integers(self):
        a = padic_from_int(2, 8, 3)
        assert padic_mul(a, a).mantissa == 9

    def test_unit_inverse_mod_256(self):
        one = padic_from_int(2, 8, 1)
        three = padic_from_int(2, 8, 3)
        q = padic_div_unit(one, three)
        assert q.mantissa == 171  # 3 * 171 = 513 = 2*256 + 1
        assert padic_mul(q, three).mantissa == 1

    def test_division_by_non_unit_rejected(self):
        one = padic_from_int(3, 4, 1)
        three = padic_from_int(3, 4, 3)
        with pytest.raises(PrecisionViolationError):
            padic_div_unit(one, three)

    def test_add_tracks_min_precision(self):
        a = padic_from_int(2, 16, 5, effective_precision=10)
        b = padic_from_int(2, 16, 7, effective_precision=4)
        assert padic_add(a, b).effective_precision == 4

    def test_mismatched_modulus_rejected(self):
        with pytest.raises(InvalidParameterError):
            padic_add(padic_from_int(2, 8, 1), padic_from_int(2, 9, 1))

    def test_mantissa_range_enforced(self):
        with pytest.raises(InvalidParameterError):
            PadicNumber(2, 4, 16, 4)


class TestPreimages:
    def test_p2_fiber_over_one(self):
        beta = padic_from_int(2, 16, 1)
        roots = sorted(r.mantissa for r in padic_preimages(beta))
        assert roots == [2, 2 ** 16 - 1]  # x^2 - x - 2 = (x - 2)(x + 1)

    def test_p2_fiber_over_zero(self):
        beta = padic_from_int(2, 16, 0)
        assert sorted(r.mantissa for r in padic_preimages(beta)) == [0, 1]

    def test_p3_fiber_over_zero(self):
        beta = padic_from_int(3, 10, 0)
        roots = sorted(r.mantissa for r in padic_preimages(beta))
        assert roots == [0, 1, 3 ** 10 - 1]  # x^3 - x = x(x-1)(x+1)

    def test_needs_two_trusted_digits(self):
        beta = padic_from_int(2, 16, 1, effective_precision=1)
        with pytest.raises(PrecisionViolationError):
            padic_preimages(beta)

    @settings(max_examples=60, deadline=None)
    @given(
        p=st.sampled_from([2, 3, 5]),
        mantissa=st.integers(min_value=0, max_value=2 ** 40),
    )
    def test_fiber_properties(self, p, mantissa):
        K = 24
        beta = padic_from_int(p, K, mantissa)
        roots = padic_preimages(beta)
        # one root per residue class (the p-to-1 structure)
        assert sorted(r.mantissa % p for r in roots) == list(range(p))
        mod_check = p ** min(beta.effective_precision + 1, K)
        for r in roots:
            g = (pow(r.mantissa, p, mod_check) - r.mantissa - p * beta.mantissa) % mod_check
            assert g == 0
            assert r.effective_precision == beta.effective_precision


class TestForwardMap:
    def test_costs_one_digit(self):
        x = padic_from_int(2, 10, 2)
        y = phi_forward(x)  # (4 - 2)/2 = 1
        assert (y.mantissa, y.modulus_exponent, y.effective_precision) == (1, 9, 9)

    def test_refuses_to_exhaust_precision(self):
        x = PadicNumber(2, 8, 3, 1)
        with pytest.raises(PrecisionViolationError):
            phi_forward(x)


# depth-2 oracle: x^4 - 2x^3 - x^2 + 2x - 8 = (x^2 - x - 4)(x^2 - x + 2)
# (substitute u = x^2 - x and factor u^2 - 2u - 8).  Each quadratic factor has
# derivative 2x - 1, odd everywhere, so greedy bit-by-bit lifting is valid —
# unlike the full quartic, whose derivative is even.
def _oracle_roots_mod_2_24():
    lifted = set()
    for c in (-4, 2):
        def f(x, c=c):
            return x * x - x + c

        sols = [x for x in range(2 ** 12) if f(x) % 2 ** 12 == 0]
        for s in sols:
            x = s
            for bit in range(12, 24):
                if f(x) % 2 ** (bit + 1) != 0:
                    x += 2 ** bit
            assert f(x) % 2 ** 24 == 0
            lifted.add(x % 2 ** 24)
    return lifted


class TestBackwardOrbit:
    def test_depth_one_p2(self):
        orbit = backward_orbit_padic(2, 1, 32)
        assert sorted(x.mantissa for x in orbit.leaves) == [2, 2 ** 32 - 1]

    def test_depth_two_p2_against_exhaustive_oracle(self):
        orbit = backward_orbit_padic(2, 2, 32)
        assert len(orbit.entries) == 4
        got = {x.mantissa % 2 ** 24 for x in orbit.leaves}
        assert got == _oracle_roots_mod_2_24()
        assert len(got) == 4  # pairwise distinct already mod 2^24

    def test_depth_one_p3_residues(self):
        orbit = backward_orbit_padic(3, 1, 20)
        assert sorted(x.mantissa % 3 for x in orbit.leaves) == [0, 1, 2]

    def test_addresses_sorted_and_distinct(self):
        orbit = backward_orbit_padic(2, 4, 40)
        addrs = orbit.addresses
        assert addrs == sorted(addrs)
        assert len(set(addrs)) == 16
        assert all(len(a) == 4 for a in addrs)

    def test_forward_inverse_consistency(self):
        # pushing the depth-3 leaves forward once recovers the depth-2
        # multiset, each element hit p times, at the shared modulus
        deep = backward_orbit_padic(2, 3, 40)
        shallow = backward_orbit_padic(2, 2, 40)
        pushed = sorted(phi_forward(x).mantissa for x in deep.leaves)
        reference = sorted(
            x.mantissa % 2 ** 39 for x in shallow.leaves for _ in range(2)
        )
        assert pushed == reference

    def test_rejects_small_precision(self):
        with pytest.raises(PrecisionViolationError, match="raise K"):
            backward_orbit_padic(2, 10, 20)

    def test_orbit_cap(self):
        with pytest.raises(ResourceLimitError):
            backward_orbit_padic(2, 17)

    def test_default_digits(self):
        orbit = backward_orbit_padic(2, 3)
        assert orbit.modulus_exponent == 64 + 3


class TestSplittingReport:
    def test_depth_eight_splits_completely(self):
        report = verify_total_splitting(backward_orbit_padic(2, 8, 64))
        assert report.count == 256
        assert report.distinct
        assert report.max_residual_deficit == 0
        assert report.passed

    def test_depth_one(self):
        report = verify_total_splitting(backward_orbit_padic(2, 1, 32))
        assert report.count == 2 and report.distinct

    def test_duplicated_leaf_fails(self):
        orbit = backward_orbit_padic(2, 2, 32)
        entries = list(orbit.entries)
        entries[1] = (entries[0][0], entries[1][1])
        doctored = PadicOrbit(
            orbit.p,
            orbit.depth,
            orbit.modulus_exponent,
            tuple(entries),
            orbit.residual_valuations,
        )
        report = verify_total_splitting(doctored)
        assert not report.distinct
        assert not report.passed

    def test_distinctness_exponent_is_minimal(self):
        orbit = backward_orbit_padic(2, 2, 32)
        report = verify_total_splitting(orbit)
        m = report.distinctness_exponent
        mantissas = [x.mantissa for x in orbit.leaves]
        assert len({v % 2 ** m for v in mantissas}) == 4
        if m > 1:
            assert len({v % 2 ** (m - 1) for v in mantissas}) < 4


class TestExport:
    def test_rows_shape(self):
        orbit = backward_orbit_padic(3, 1, 20)
        rows = orbit_rows(orbit)
        assert [r[0] for r in rows] == ["0", "1", "2"]
        assert all(len(r[1]) == 20 for r in rows)
        assert all(r[2] == 20 for r in rows)

    def test_digit_rendering_roundtrip(self):
        x = padic_from_int(3, 6, 100)  # 100 = 10201 base 3
        assert x.digits() == "010201"
