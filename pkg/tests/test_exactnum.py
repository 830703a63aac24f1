import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals, signed_rationals
from jacobi_racah.errors import InadmissibleParameters, ModeArityMismatch, ZeroDenominator
from jacobi_racah.exactnum import (HigherRank, ParameterSet, check_admissible, format_rational,
                                   gen_binomial, hyp_terminating, parse_rational, pochhammer, rat,
                                   require_admissible, sample_parameters)


def test_pochhammer_examples():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(-3, 5) == 0
    assert pochhammer(2, 3) == 24


@given(signed_rationals(), st.integers(0, 8))
def test_pochhammer_matches_product(x, n):
    assert pochhammer(x, n) == math.prod((x + i for i in range(n)), start=Fraction(1))


def test_pochhammer_rejects_negative_length():
    with pytest.raises(ValueError):
        pochhammer(1, -1)


def test_gen_binomial_examples():
    assert gen_binomial(Fraction(9, 4), 0) == 1
    assert gen_binomial(5, 2) == 10
    assert gen_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)


@given(st.integers(0, 15), st.integers(0, 15))
def test_gen_binomial_agrees_with_comb(n, k):
    assert gen_binomial(n, k) == math.comb(n, k)


def _brute_hyp(num, den, k, z):
    total, n = Fraction(0), 0
    while n <= k:
        term = Fraction(1)
        for a in num:
            term *= pochhammer(a, n)
        for b in den:
            term /= pochhammer(b, n)
        total += term * Fraction(z) ** n / math.factorial(n)
        n += 1
    return total


def test_hyp_examples():
    assert hyp_terminating([0, 5], [2], 0, 1) == 1
    assert hyp_terminating([-1, 2], [3], 1, 1) == Fraction(1, 3)
    # Hahn 3F2 at lam1=1, lam2=2, N=2, k=x=1
    assert hyp_terminating([-1, 3, -1], [1, -2], 1, 1) == Fraction(-1, 2)


@given(st.integers(0, 6), rationals(), rationals(), rationals(), signed_rationals())
def test_hyp_matches_direct_sum(k, a, b, c, z):
    assert hyp_terminating([-k, a, b], [c, c + a], k, z) == _brute_hyp([-k, a, b], [c, c + a], k, z)


def test_hyp_stops_at_vanishing_numerator_before_pole():
    # (-1)_n kills n >= 2 before the (-1)_n denominator pole at n = 2
    assert hyp_terminating([-3, -1], [-1], 3, 1) == _brute_hyp([-3, -1], [-1], 1, 1)


def test_hyp_raises_on_denominator_pole():
    with pytest.raises(ZeroDenominator):
        hyp_terminating([-3, 1], [-1], 3, 1)


def test_hyp_requires_terminating_parameter():
    with pytest.raises(ValueError):
        hyp_terminating([1, 2], [3], 2, 1)


def test_rat_rejects_float():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/6") == Fraction(1, 2)


@given(signed_rationals(50, 50))
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_rational_integer_form():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


def test_parameter_set_parse_and_index():
    p = ParameterSet.parse("1/2, 3/2,2")
    assert p.n == 3 and p[1] == Fraction(1, 2) and p[3] == 2
    assert p.subset_sum({1, 3}) == Fraction(5, 2)
    assert str(p) == "1/2,3/2,2"
    assert p.swapped(1, 3).lambdas == (2, Fraction(3, 2), Fraction(1, 2))
    with pytest.raises(IndexError):
        p[0]


def test_admissible_examples():
    assert check_admissible(ParameterSet.parse("1/2,3/2"), 4, "hahn") == []
    assert "λ₁ ∈ {0,…,−(N−1)}" in check_admissible(ParameterSet.of(-1, 2), 3, "hahn")
    racah = check_admissible(ParameterSet.of(1, -1, 1), 2, "racah")
    assert any(v.startswith("λ₁+λ₂") for v in racah)


def test_admissible_depths():
    # lam1 = -2 is forbidden only from N = 3 on
    assert check_admissible(ParameterSet.of(-2, 5), 2, "hahn") == []
    assert check_admissible(ParameterSet.of(-2, 5), 3, "hahn")
    # a union sum of -(2N-2) is the last forbidden value
    assert check_admissible(ParameterSet.of(Fraction(-5, 2), Fraction(-7, 2)), 4, "hahn")
    assert not check_admissible(ParameterSet.of(Fraction(-7, 2), Fraction(-7, 2)), 4, "hahn")


def test_admissible_arity_and_errors():
    with pytest.raises(ModeArityMismatch):
        check_admissible(ParameterSet.of(1, 2, 3), 2, "hahn")
    with pytest.raises(InadmissibleParameters) as info:
        require_admissible(ParameterSet.of(0, 1), 1, "hahn")
    assert info.value.violations


def test_higher_rank_subsets():
    p = ParameterSet.of(Fraction(1, 2), Fraction(-1, 2), 3, 4)
    assert check_admissible(p, 0, HigherRank(2))
    # 1+2 only appears when the scheme uses that union
    assert not check_admissible(p, 0, HigherRank(2, (frozenset({2, 3}), frozenset({1, 2, 3, 4}))))
    assert all("D" in v for v in check_admissible(p, 0, HigherRank(2)))


@pytest.mark.parametrize("mode,n", [("hahn", 2), ("racah", 3), (HigherRank(4), 5)])
def test_sample_parameters_deterministic_and_admissible(mode, n):
    a = sample_parameters(n, 6, 11, mode)
    assert a == sample_parameters(n, 6, 11, mode)
    assert check_admissible(a, 6, mode) == []
    assert all(0 < v.numerator <= 12 and v.denominator <= 12 for v in a.lambdas)


def test_sample_parameters_vary_with_seed():
    draws = {sample_parameters(2, 4, s) for s in range(10)}
    assert len(draws) > 5
