"""Bound formulas: exact values, hypothesis gates, conversions, summaries."""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

import pytest

from indtrans.bounds import (
    Params,
    convert,
    decompose,
    even_family_points,
    even_family_value,
    exact_even_q,
    exact_odd_q,
    extension_threshold,
    n_exact_defect_one,
    summary,
    upper_general,
    upper_linear,
    upper_odd_balanced,
    upper_odd_general,
)
from indtrans.errors import HypothesisError


class TestDecompose:
    def test_examples(self):
        assert (decompose(6, 1).q, decompose(6, 1).k) == (3, 0)
        assert (decompose(7, 2).q, decompose(7, 2).k) == (2, 1)
        assert (decompose(7, 3).q, decompose(7, 3).k) == (1, 3)

    def test_reconstruction(self):
        for r in range(2, 40):
            for d in range(0, r):
                p = decompose(r, d)
                assert p.q * (d + 1) + p.k == r
                assert 0 <= p.k <= d

    def test_gate(self):
        with pytest.raises(HypothesisError):
            decompose(5, 5)


class TestDefectOneValue:
    def test_even(self):
        assert n_exact_defect_one(4, 10) == 15

    def test_odd(self):
        assert n_exact_defect_one(5, 10) == 15

    def test_two_classes(self):
        assert n_exact_defect_one(2, 7) == 7


class TestUpperBounds:
    def test_general_picks_the_larger_branch(self):
        assert upper_general(Params(6, 1, 12)) == 16

    def test_linear_matches(self):
        assert upper_linear(Params(6, 1, 12)) == 16

    def test_balanced_zero_k_branch(self):
        # With k = 0 the general bound equals 2*delta*(1 - 1/q).
        for q in (2, 4, 6):
            for d in (0, 1, 2):
                p = Params(q * (d + 1), d, 30)
                assert upper_general(p) == 2 * 30 * (1 - Fraction(1, q))

    def test_odd_balanced_exact_point(self):
        assert upper_odd_balanced(Params(6, 1, 12)) == 15

    def test_odd_balanced_fraction(self):
        assert upper_odd_balanced(Params(9, 2, 24)) == Fraction(92, 3)

    def test_odd_balanced_gate(self):
        with pytest.raises(HypothesisError, match="r = q"):
            upper_odd_balanced(Params(7, 2, 10))
        with pytest.raises(HypothesisError, match="odd q"):
            upper_odd_balanced(Params(8, 1, 10))

    def test_odd_general_gate(self):
        with pytest.raises(HypothesisError):
            upper_odd_general(Params(8, 1, 10))


class TestExactValues:
    def test_even_q(self):
        assert exact_even_q(Params(8, 1, 10)) == 15

    def test_even_q_gate(self):
        with pytest.raises(HypothesisError):
            exact_even_q(Params(6, 1, 10))

    def test_odd_q(self):
        assert exact_odd_q(Params(13, 0, 12)) == 22

    def test_odd_q_gate(self):
        with pytest.raises(HypothesisError):
            exact_odd_q(Params(9, 2, 10))

    def test_complement_identity_even_q(self):
        # (r-1)n - ceil(qn / (2(q-1))) through the conversion at c = 2 - 2/q.
        for q in (2, 4, 8):
            for d in (0, 1):
                r = q * (d + 1)
                c = 2 - Fraction(2, q)
                for n in range(1, 40):
                    lhs = convert(c, "f", n=n, r=r)
                    assert lhs == (r - 1) * n - ceil(Fraction(q * n, 2 * (q - 1)))

    def test_complement_identity_odd_q(self):
        # (r-1)n - ceil((q-1)n / (2(q-2))) through the conversion at c = 2 - 2/(q-1).
        for q in (13, 15):
            for d in (0, 1):
                r = q * (d + 1)
                c = 2 - Fraction(2, q - 1)
                for n in range(1, 40):
                    lhs = convert(c, "f", n=n, r=r)
                    assert lhs == (r - 1) * n - ceil(Fraction((q - 1) * n, 2 * (q - 2)))


class TestConvert:
    def test_examples(self):
        assert convert(Fraction(5, 4), "f", n=10, r=6) == 42
        assert convert(Fraction(5, 4), "n", delta=4) == 5
        assert convert(1, "delta", n=7) == 7

    def test_f_matches_closed_form_for_six_classes(self):
        # At scale 5/4, f(n, 6, 5) = floor(21n/5) for every n.
        for n in range(1, 60):
            assert convert(Fraction(5, 4), "f", n=n, r=6) == (21 * n) // 5

    def test_scale_gate(self):
        with pytest.raises(HypothesisError):
            convert(Fraction(1, 2), "n", delta=3)

    def test_biconditional_sample(self):
        for c in (Fraction(1), Fraction(5, 4), Fraction(3, 2)):
            for n in range(1, 30):
                for delta in range(1, 30):
                    assert (n > floor(c * delta)) == (delta < ceil(Fraction(n) / c))


class TestExtension:
    def test_zero_reduces_to_linear(self):
        assert extension_threshold(6, 1, 0) == Fraction(4, 3)

    def test_interior_value(self):
        assert extension_threshold(6, 1, 2) == Fraction(3, 2)

    def test_gate(self):
        with pytest.raises(HypothesisError):
            extension_threshold(6, 1, 5)

    def test_zero_case_matches_linear_bound_everywhere(self):
        for r in range(2, 30):
            for d in range(0, r):
                p = Params(r, d, 7)
                assert extension_threshold(r, d, 0) * p.delta == upper_linear(p)


class TestSummary:
    def test_six_one_four(self):
        rep = summary(6, 1, 4)
        assert (rep.lower, rep.upper, rep.exact) == (5, 5, True)
        assert "six-five" in rep.exact_tags
        assert "even-q-family(q=2,i=2)" in rep.lower_tags

    def test_eight_one_ten(self):
        rep = summary(8, 1, 10)
        assert (rep.lower, rep.upper, rep.exact) == (15, 15, True)
        assert "even-q" in rep.exact_tags

    def test_seven_two_twelve(self):
        # Both bounds floor to 12 at this point, but no identity gate applies.
        rep = summary(7, 2, 12)
        assert rep.lower == 12 and rep.upper == 12
        assert rep.exact_tags == ()

    def test_even_family_enumeration(self):
        assert (4, 1) in set(even_family_points(8, 1))
        assert (2, 3) in set(even_family_points(8, 1))
        assert even_family_value(2, 2, 1, 4) == 5
        assert even_family_value(4, 1, 1, 10) == 15

    def test_identity_points_are_exact_on_small_grid(self):
        for r in range(2, 25):
            for d in range(0, min(4, r - 1) + 1):
                if d >= r:
                    continue
                p = decompose(r, d)
                gated = (p.q % 2 == 0 and p.q >= 4 * p.k) or (
                    p.q % 2 == 1 and p.q >= 6 * p.d + 6 * p.k + 7
                )
                for delta in (1, 5, 12):
                    rep = summary(r, d, delta)
                    assert rep.lower <= rep.upper
                    if gated:
                        assert rep.exact, (r, d, delta)


class TestOrderingChain:
    def test_general_below_linear_small_grid(self):
        for r in range(2, 20):
            for d in range(0, min(8, r - 1) + 1):
                for delta in (1, 7, 20):
                    p = Params(r, d, delta)
                    assert upper_general(p) <= upper_linear(p)

    def test_odd_bounds_below_general_small_grid(self):
        for r in range(2, 20):
            for d in range(0, min(8, r - 1) + 1):
                for delta in (1, 7, 20):
                    p = Params(r, d, delta)
                    if p.q >= 3 and p.q % 2 == 1:
                        if p.k == 0:
                            assert upper_odd_balanced(p) <= upper_general(p)
                        if p.q >= 6 * p.k:
                            assert upper_odd_general(p) <= upper_general(p)
