import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tokenjoin.strdist import (
    distance_to_similarity,
    ld,
    ld_bounded,
    max_ld_given_nld,
    min_ld_given_nld_exceeds,
    min_partner_len,
    nld,
    nld_bounds_from_lengths,
    normalized_within,
)

from conftest import naive_ld, nld_frac, strings_upto

short_text = st.text(alphabet="abcdef", max_size=12)


class TestLd:
    def test_reference_values(self):
        assert ld("Thomson", "Thompson") == 1
        assert ld("Alex", "Alexa") == 1

    def test_identity(self):
        for x in ("", "a", "kalan", "ab cd"):
            assert ld(x, x) == 0

    def test_empty_sides(self):
        assert ld("", "abc") == 3
        assert ld("abc", "") == 3

    @given(short_text, short_text)
    def test_matches_naive_full_matrix(self, x, y):
        assert ld(x, y) == naive_ld(x, y)

    @given(short_text, short_text)
    def test_symmetry_and_length_bounds(self, x, y):
        d = ld(x, y)
        assert d == ld(y, x)
        assert abs(len(x) - len(y)) <= d <= max(len(x), len(y), 0) or (x == y and d == 0)


class TestLdBounded:
    def test_reference_value_with_cap(self):
        assert ld_bounded("Thomson", "Thompson", 1) == 1

    def test_over_cap_frozen_case(self):
        assert naive_ld("abc", "xyz") == 3  # the independent oracle fixes the expectation
        assert ld_bounded("abc", "xyz", 1) is None

    def test_identical_with_zero_cap(self):
        assert ld_bounded("same", "same", 0) == 0

    def test_negative_cap_rejected(self):
        with pytest.raises(ValueError):
            ld_bounded("a", "b", -1)

    @given(short_text, short_text, st.integers(min_value=0, max_value=14))
    def test_differential_vs_plain_dp(self, x, y, cap):
        truth = naive_ld(x, y)
        got = ld_bounded(x, y, cap)
        if truth <= cap:
            assert got == truth
        else:
            assert got is None


class TestNld:
    def test_reference_values_exact_rationals(self):
        d = ld("Thomson", "Thompson")
        assert Fraction(2 * d, 7 + 8 + d) == Fraction(1, 8)
        assert nld("Thomson", "Thompson") == 1 / 8
        d = ld("Alex", "Alexa")
        assert Fraction(2 * d, 4 + 5 + d) == Fraction(1, 5)
        assert nld("Alex", "Alexa") == 1 / 5

    def test_boundaries(self):
        assert nld("", "") == 0.0
        assert nld("abc", "abc") == 0.0
        assert nld("", "abc") == 1.0

    @given(short_text, short_text)
    def test_range_lemma(self, x, y):
        assert 0.0 <= nld(x, y) <= 1.0

    @given(short_text, short_text)
    def test_sandwiched_by_length_bounds(self, x, y):
        value = nld_frac(x, y)
        lx, ly = len(x), len(y)
        if lx == 0 and ly == 0:
            exact_lo = exact_hi = Fraction(0)
        else:
            a = Fraction(min(lx, ly), max(lx, ly))
            exact_lo, exact_hi = 1 - a, Fraction(2) / (a + 2)
        assert exact_lo <= value <= exact_hi
        lo, hi = nld_bounds_from_lengths(lx, ly)
        assert lo == pytest.approx(float(exact_lo))
        assert hi == pytest.approx(float(exact_hi))


class TestMetricAxioms:
    def test_nld_metric_on_random_triples(self):
        rng = random.Random(17)
        for _ in range(2000):
            x = "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
            y = "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
            z = "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
            dxy, dyz, dxz = nld_frac(x, y), nld_frac(y, z), nld_frac(x, z)
            assert dxy == nld_frac(y, x)
            assert (dxy == 0) == (x == y)
            assert dxy + dyz >= dxz


class TestThresholdBounds:
    def test_frozen_examples(self):
        assert max_ld_given_nld(10, 0.1, True) == 1  # floor(2/1.9)
        assert max_ld_given_nld(10, 0.1, False) == 1  # floor(1/0.9)
        assert max_ld_given_nld(7, 0.0, True) == 0
        assert max_ld_given_nld(7, 0.0, False) == 0
        assert min_partner_len(10, 0.1) == 9  # ceil(0.9 * 10)
        assert min_partner_len(10, 0.0) == 10
        assert min_partner_len(0, 0.5) == 0
        assert min_ld_given_nld_exceeds(10, 0.1, True) == 0  # floor(1/1.9)
        assert min_ld_given_nld_exceeds(10, 0.1, False) == 1  # floor(2/1.9)
        assert min_ld_given_nld_exceeds(0, 0.3, True) == 0

    def test_exact_rational_flooring_at_boundaries(self):
        # naive float arithmetic disagrees with the exact formula on the
        # binary64 value of 0.3 at |y| = 10; the implementation must follow
        # the exact rational, which every other threshold comparison uses
        assert math.ceil((1 - 0.3) * 10) == 7  # the float trap
        assert min_partner_len(10, 0.3) == 8  # exact on Fraction(0.3)
        assert min_partner_len(10, 0.1) == 9
        assert min_partner_len(20, 0.1) == 18

    def test_divergent_configuration_rejected(self):
        with pytest.raises(ValueError):
            max_ld_given_nld(10, 1.0, False)
        assert max_ld_given_nld(10, 1.0, True) == 20  # finite branch is fine at T=1

    def test_range_validation(self):
        for fn in (max_ld_given_nld, min_ld_given_nld_exceeds):
            with pytest.raises(ValueError):
                fn(5, -0.1, True)
        with pytest.raises(ValueError):
            min_partner_len(5, 1.5)

    def _soundness_corpus(self):
        rng = random.Random(23)
        pairs = []
        universe = strings_upto("ab", 5)
        for x in universe:
            for y in universe:
                pairs.append((x, y))
        for _ in range(2000):
            x = "".join(rng.choice("abcdef") for _ in range(rng.randint(0, 14)))
            y = "".join(rng.choice("abcdef") for _ in range(rng.randint(0, 14)))
            pairs.append((x, y))
        return pairs

    @pytest.mark.parametrize("threshold", [0.0, 0.1, 0.25, 0.5])
    def test_lemma_soundness_exhaustive_and_random(self, threshold):
        t_frac = Fraction(threshold)
        for x, y in self._soundness_corpus():
            if len(x) > len(y):
                x, y = y, x
            value = nld_frac(x, y)
            d = naive_ld(x, y)
            if value <= t_frac:
                # |x| <= |y| branch of the upper bound, plus the partner-length floor
                assert d <= max_ld_given_nld(len(y), threshold, True)
                assert len(x) >= min_partner_len(len(y), threshold)
                if len(y) > len(x):
                    # reversed roles exercise the |longer| > |shorter| branch
                    assert d <= max_ld_given_nld(len(x), threshold, False)
            else:
                assert d > min_ld_given_nld_exceeds(len(y), threshold, True)
                if len(y) > len(x):
                    assert d > min_ld_given_nld_exceeds(len(x), threshold, False)


class TestLengthBounds:
    def test_frozen_examples(self):
        lo, hi = nld_bounds_from_lengths(7, 8)
        assert lo == 1 - 7 / 8
        assert hi == 2 / (7 / 8 + 2)
        assert nld_bounds_from_lengths(5, 5) == (0.0, 2 / 3)
        assert nld_bounds_from_lengths(0, 5) == (1.0, 1.0)
        assert nld_bounds_from_lengths(0, 0) == (0.0, 0.0)

    def test_reference_pair_lies_inside(self):
        lo, hi = nld_bounds_from_lengths(7, 8)
        assert lo <= nld("Thomson", "Thompson") <= hi


class TestNormalizedWithin:
    @given(short_text, short_text, st.sampled_from([0.0, 0.025, 0.1, 0.2, 0.5, 0.9]))
    def test_agrees_with_exact_rational(self, x, y, threshold):
        d = naive_ld(x, y)
        expected = nld_frac(x, y) <= Fraction(threshold)
        assert normalized_within(d, len(x) + len(y), threshold) == expected


class TestDistanceToSimilarity:
    def test_schemes(self):
        assert distance_to_similarity(0.2, "one-minus") == pytest.approx(0.8)
        assert distance_to_similarity(0.0, "reciprocal") == 1.0
        assert distance_to_similarity(1.0, "exponential") == pytest.approx(math.exp(-1))

    def test_rejections(self):
        with pytest.raises(ValueError):
            distance_to_similarity(-0.1, "one-minus")
        with pytest.raises(ValueError):
            distance_to_similarity(0.1, "log")
