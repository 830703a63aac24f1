from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import rationals
from jacobi_racah import verify as vf
from jacobi_racah.coupling import CouplingScheme, enumerate_schemes
from jacobi_racah.errors import InadmissibleParameters
from jacobi_racah.exactnum import ParameterSet, sample_parameters
from jacobi_racah.families import classical_value
from jacobi_racah.polyalg import Poly, expand_in_basis, variables


def test_hahn_convolution_small_cases():
    p = ParameterSet.of(1, 2)
    v, w = vf.hahn_bases(p, 1)
    assert w[0] == v[0] + v[1]
    x, y = (Poly.var(variables(2), n) for n in variables(2))
    assert w[1] == y - 2 * x
    assert vf.verify_hahn_convolution(p, 1).passed


def test_racah_convolution_small_cases():
    p = ParameterSet.of(1, 1, 1)
    v, w = vf.racah_bases(p, 0)
    assert v == w == [1]
    assert vf.verify_racah_convolution(p, 0).passed
    # brute-force 2x2 transition at N=1 against the formula
    v, w = vf.racah_bases(p, 1)
    brute = [expand_in_basis(w[l], v) for l in range(2)]
    assert classical_value("racah", 1, 1, p, 1) == Fraction(-1, 3)
    assert vf.verify_racah_convolution(p, 1).passed
    # by hand: w0 = x2 + x3 - 2 x1, v0 = 2 x3 - x1 - x2, v1 = x2 - x1
    assert brute[0] == [Fraction(1, 2), Fraction(3, 2)]


def test_racah_direct_bases_agree():
    p = ParameterSet.of(Fraction(2, 3), Fraction(5, 4), Fraction(1, 6))
    assert vf.racah_bases(p, 3) == vf.racah_bases_direct(p, 3)


@pytest.mark.parametrize("family", ["hahn", "racah"])
def test_orthogonality_and_gamma_trivial_and_examples(family):
    p = ParameterSet.of(1, 2) if family == "hahn" else ParameterSet.of(1, 2, 3)
    assert vf.verify_orthogonality(family, p, 0).passed
    assert vf.verify_gamma_sums(family, p, 0).passed
    assert vf.verify_gamma_sums(family, p, 3).passed


@pytest.mark.parametrize("side", vf.TRIDIAGONAL_SIDES)
def test_tridiagonal_sides(side):
    p = ParameterSet.of(Fraction(1, 2), Fraction(3, 2))
    if side.startswith("Racah"):
        p = ParameterSet.of(Fraction(1, 2), Fraction(3, 2), Fraction(5, 2))
    r = vf.verify_tridiagonal(p, 4, side)
    assert r.passed, r.to_text()


def test_tridiagonal_bad_side():
    with pytest.raises(ValueError):
        vf.verify_tridiagonal(ParameterSet.of(1, 2), 2, "HahnZ")


def test_inadmissible_raises():
    with pytest.raises(InadmissibleParameters):
        vf.verify_hahn_convolution(ParameterSet.of(-1, 2), 3)
    with pytest.raises(InadmissibleParameters):
        vf.verify_racah_convolution(ParameterSet.of(1, -1, 1), 2)


def test_scheme_examples():
    p = ParameterSet.of(Fraction(1, 2), Fraction(3, 2), Fraction(5, 2))
    s = CouplingScheme.parse("1|2|3 -> 12|3 -> 123")
    r = vf.verify_scheme(s, p, D=3, K=2)
    assert r.passed
    assert any(c.name == "eigenvector k=(0, 0)" for c in r.checks)


def test_scheme_inadmissible():
    s = CouplingScheme.parse("1|2|3 -> 12|3 -> 123")
    with pytest.raises(InadmissibleParameters):
        vf.verify_scheme(s, ParameterSet.of(1, -1, 3), D=3, K=2)


def test_conjugation_default_scope():
    r = vf.verify_conjugation(Fraction(1, 3), Fraction(5, 2), max_l=2, max_m=2, one_sided_degree=4,
                              two_sided_degree=3)
    assert r.passed and len(r.checks) == 3 + 9


@settings(max_examples=10)
@given(rationals(), rationals())
def test_conjugation_property(alpha, beta):
    assert vf.verify_conjugation(alpha, beta, 2, 2, 4, 3).passed


def test_printed_examples():
    assert vf.verify_printed_examples(ParameterSet.of(Fraction(1, 2), Fraction(3, 2), Fraction(5, 2),
                                                      Fraction(7, 3)), K=2).passed


def test_cross_family():
    assert vf.verify_cross_family(sample_parameters(3, 3, 4, "racah"), 3).passed


def test_reports_are_deterministic_apart_from_timing():
    p = ParameterSet.of(Fraction(1, 2), Fraction(3, 2))
    a, b = vf.verify_hahn_convolution(p, 3, seed=1), vf.verify_hahn_convolution(p, 3, seed=1)
    a.elapsed_ms = b.elapsed_ms = 0
    assert a.to_json() == b.to_json()
