import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unicipher.cipher import CipherKey, PlaintextMatrix, encrypt
from unicipher.errors import (
    ComplexFixedPoints,
    DivisionByZeroInOrbit,
    ZeroDenominator,
    ZeroSequenceEntry,
)
from unicipher.matrix import Mat2, golden_matrix
from unicipher.ratios import (
    BOTTOM_OVER_TOP,
    TOP_OVER_BOTTOM,
    ConvergenceMode,
    RatioParams,
    column_ratio,
    convergence_profile,
    exponential_rate,
    fixed_points,
    ratio_iterate,
    round_half_even,
    row_ratio_interval,
)
from unicipher.sampling import random_cipher_key, random_plaintext

TAU = (1 + math.sqrt(5)) / 2


class TestFixedPoints:
    def test_cat_value(self):
        fp = fixed_points(3, 1)
        assert abs(fp.phi_plus - (3 + math.sqrt(5)) / 2) < 1e-15
        assert abs(fp.phi_plus - (1 + TAU)) < 1e-12

    def test_golden_value(self):
        fp = fixed_points(1, -1)
        assert abs(fp.phi_plus - TAU) < 1e-15
        assert abs(fp.phi_minus - (1 - TAU)) < 1e-15

    def test_double_root(self):
        fp = fixed_points(2, 1)
        assert fp.phi_plus == fp.phi_minus == 1.0
        assert fp.compare_plus(Fraction(1)) == 0

    def test_complex_roots_rejected(self):
        with pytest.raises(ComplexFixedPoints):
            fixed_points(1, 1)

    @given(st.integers(-20, 20), st.integers(-20, 20))
    def test_roots_satisfy_polynomial(self, t, d):
        if t * t < 4 * d:
            with pytest.raises(ComplexFixedPoints):
                fixed_points(t, d)
            return
        fp = fixed_points(t, d)
        for root in (fp.phi_plus, fp.phi_minus):
            assert abs(root * root - t * root + d) < 1e-9 * max(1.0, root * root)
        assert abs(fp.phi_plus * fp.phi_minus - d) < 1e-9 * max(1, abs(d))
        assert abs(fp.phi_plus + fp.phi_minus - t) < 1e-12 * max(1, abs(t))

    @given(st.integers(-20, 20), st.integers(-20, 20), st.fractions())
    def test_exact_comparisons_agree_with_floats(self, t, d, q):
        if t * t < 4 * d:
            return
        fp = fixed_points(t, d)
        fq = float(q)
        for cmp, ref in ((fp.compare_plus(q), fp.phi_plus), (fp.compare_minus(q), fp.phi_minus)):
            if abs(fq - ref) > 1e-6 * max(1.0, abs(fq), abs(ref)):
                assert cmp == (1 if fq > ref else -1)

    def test_decimal_expansion(self):
        # 15 digits of the golden ratio
        assert fixed_points(1, -1).phi_plus_decimal(15) == "1.618033988749894"
        assert fixed_points(3, 1).phi_plus_decimal(12) == "2.618033988749"


class TestRatioIteration:
    def test_cat_orbit(self):
        orbit = ratio_iterate(RatioParams(3, 1, Fraction(1)), 3)
        assert orbit == (1, 2, Fraction(5, 2), Fraction(13, 5))

    def test_fixed_point_is_constant(self):
        orbit = ratio_iterate(RatioParams(2, 1, Fraction(1)), 5)
        assert set(orbit) == {Fraction(1)}

    def test_fibonacci_ratio_orbit(self):
        orbit = ratio_iterate(RatioParams(1, -1, Fraction(1)), 4)
        assert orbit == (1, 2, Fraction(3, 2), Fraction(5, 3), Fraction(8, 5))

    def test_orbit_hitting_zero_raises(self):
        # 3 - 2 / (2/3) = 0
        with pytest.raises(DivisionByZeroInOrbit):
            ratio_iterate(RatioParams(3, 2, Fraction(2, 3)), 2)

    def test_zero_start_rejected(self):
        with pytest.raises(ValueError):
            RatioParams(3, 1, Fraction(0))


class TestConvergenceProfile:
    def test_decreasing_from_above(self):
        profile = convergence_profile(RatioParams(3, 1, Fraction(10)), 40)
        assert profile.mode is ConvergenceMode.MONOTONE_DECREASING
        assert profile.errors[-1] < 1e-12

    def test_increasing_from_between(self):
        profile = convergence_profile(RatioParams(3, 1, Fraction(1)), 40)
        assert profile.mode is ConvergenceMode.MONOTONE_INCREASING

    def test_alternating_split(self):
        profile = convergence_profile(RatioParams(1, -1, Fraction(3)), 40)
        assert profile.mode is ConvergenceMode.ALTERNATING_SPLIT
        evens, odds = profile.orbit[0::2], profile.orbit[1::2]
        assert all(b < a for a, b in zip(evens, evens[1:]))
        assert all(b > a for a, b in zip(odds, odds[1:]))

    @given(st.integers(0, 10**9))
    @settings(max_examples=150, deadline=None)
    def test_matches_theorem_classes(self, seed):
        rng = random.Random(seed)
        d = rng.choice((1, -1))
        if d == 1:
            t = rng.randint(2, 12)
            fp = fixed_points(t, d)
            while True:
                a0 = Fraction(rng.randint(1, 400), rng.randint(1, 40))
                if fp.compare_minus(a0) > 0:
                    break
            expected = (
                ConvergenceMode.MONOTONE_DECREASING
                if fp.compare_plus(a0) >= 0
                else ConvergenceMode.MONOTONE_INCREASING
            )
        else:
            t = rng.randint(1, 12)
            a0 = Fraction(rng.randint(1, 400), rng.randint(1, 40))
            expected = ConvergenceMode.ALTERNATING_SPLIT
        assert convergence_profile(RatioParams(t, d, a0), 48).mode is expected

    @given(st.integers(0, 10**9))
    @settings(max_examples=60, deadline=None)
    def test_decay_is_geometric_for_trace_three_plus(self, seed):
        rng = random.Random(seed)
        d = rng.choice((1, -1))
        t = rng.randint(3, 12)
        a0 = Fraction(rng.randint(1, 400), rng.randint(1, 40)) + 1
        profile = convergence_profile(RatioParams(t, d, a0), 48)
        rate = exponential_rate(profile.errors[1:])
        assert rate < 1.0


class TestRowRatioInterval:
    def test_golden_n10(self):
        lo, hi = row_ratio_interval(golden_matrix(10))
        assert (lo, hi) == (Fraction(55, 34), Fraction(89, 55))

    def test_cat_interval_is_sorted(self):
        cm = CipherKey.arnolds_cat(4).coding_matrix
        lo, hi = row_ratio_interval(cm)
        assert (lo, hi) == (Fraction(34, 13), Fraction(55, 21))

    def test_single_point_interval(self):
        import warnings

        from unicipher.matrix import KeyMatrix, SeedPair, build_coding_matrix

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            identity_key = KeyMatrix(Mat2(1, 0, 0, 1))
        cm = build_coding_matrix(identity_key, SeedPair(2, 3), 4)
        lo, hi = row_ratio_interval(cm)
        assert lo == hi == 1

    def test_zero_entry_rejected(self):
        with pytest.raises(ZeroSequenceEntry):
            row_ratio_interval(golden_matrix(1))

    @given(st.integers(0, 10**9))
    @settings(max_examples=150, deadline=None)
    def test_mediant_property(self, seed):
        # every honest ciphertext row ratio lies inside the closed interval
        rng = random.Random(seed)
        key = random_cipher_key(rng, n_lo=2, n_hi=24)
        p = random_plaintext(rng)
        lo, hi = row_ratio_interval(key.coding_matrix)
        c = p.p @ key.coding_matrix.matrix
        for c1, c2 in c.rows():
            assert lo <= Fraction(c1, c2) <= hi


class TestColumnRatio:
    def test_final_example_values(self):
        ratios = column_ratio(Mat2(1450, 554, 733, 280))
        assert ratios.left == Fraction(733, 1450)
        assert ratios.right == Fraction(280, 554)
        assert abs(float(ratios.left) - 0.5055) < 5e-4
        assert abs(float(ratios.right) - 0.5054) < 5e-4

    def test_both_orientations(self):
        c1 = column_ratio(Mat2(251, 96, 128, 49))
        assert c1.orientation == BOTTOM_OVER_TOP
        flipped = c1.flipped()
        assert flipped.orientation == TOP_OVER_BOTTOM
        assert flipped.left == Fraction(251, 128)
        assert round(float(flipped.left), 2) == 1.96
        c2 = column_ratio(Mat2(1761, 673, 128, 49)).flipped()
        assert round(float(c2.left), 1) == 13.8

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            column_ratio(Mat2(0, 5, 1, 1))

    def test_closeness_shrinks_with_exponent(self):
        # |c21/c11 - c22/c12| = |det P| / (c11 * c12) decays as entries grow
        p = PlaintextMatrix(Mat2(14, 20, 9, 7))
        gaps = []
        for n in range(2, 21):
            pkg = encrypt(p, CipherKey.arnolds_cat(n))
            r = column_ratio(pkg.c)
            gaps.append(abs(r.left - r.right))
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < Fraction(1, 10**10)


class TestRounding:
    def test_half_even(self):
        assert round_half_even(Fraction(733, 1450), 2) == "0.51"
        assert round_half_even(Fraction(1, 8), 2) == "0.12"
        assert round_half_even(Fraction(3, 8), 2) == "0.38"
        assert round_half_even(Fraction(-733, 1450), 2) == "-0.51"
        assert round_half_even(Fraction(5, 2), 0) == "2"
        assert round_half_even(Fraction(7, 2), 0) == "4"

    @given(st.fractions(), st.integers(0, 6))
    def test_round_trip_error_is_at_most_half_ulp(self, value, digits):
        text = round_half_even(value, digits)
        assert abs(Fraction(text) - value) <= Fraction(1, 2 * 10**digits)
