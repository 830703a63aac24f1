import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from jacobi_racah import families as fm
from jacobi_racah.exactnum import ParameterSet, pochhammer, sample_parameters
from jacobi_racah.polyalg import Poly, variables

U = ("u",)


def test_jacobi_examples():
    lam, lamp = Fraction(2, 3), Fraction(7, 4)
    assert fm.jacobi_poly(0, lam, lamp, U) == 1
    u = Poly.var(U, "u")
    assert fm.jacobi_poly(1, lam, lamp, U) == (u.scale(lam + lamp) + (lam - lamp)).scale(Fraction(1, 2))


@given(st.integers(0, 7), rationals(), rationals())
def test_jacobi_sum_form_matches_hypergeometric(l, lam, lamp):
    assert fm.jacobi_poly(l, lam, lamp, U) == fm.jacobi_poly_hypergeometric(l, lam, lamp, U)


@given(st.integers(0, 7), rationals(), rationals())
def test_jacobi_endpoint_values(l, lam, lamp):
    p = fm.jacobi_poly(l, lam, lamp, U)
    assert p.eval({"u": 1}) == pochhammer(lam, l) / math.factorial(l)
    assert p.eval({"u": -1}) == (-1) ** l * pochhammer(lamp, l) / math.factorial(l)


@given(st.integers(0, 6), rationals(), rationals(), rationals(), rationals())
def test_homogenized_matches_substitution(k, lam_i, lam_j, a, b):
    """Compare with (a+b)^k P_k((b-a)/(a+b)) evaluated directly."""
    vs = ("a", "b")
    A, B = Poly.var(vs, "a"), Poly.var(vs, "b")
    h = fm.homogenized_jacobi(k, lam_i, lam_j, A, B)
    p = fm.jacobi_poly(k, lam_i, lam_j, U)
    assert h.eval({"a": a, "b": b}) == (a + b) ** k * p.eval({"u": (b - a) / (a + b)})
    assert h.is_homogeneous() and (k == 0 or h.degree() == k)


def test_homogenized_examples():
    vs = ("x", "y")
    x, y = Poly.var(vs, "x"), Poly.var(vs, "y")
    l1, l2 = Fraction(1, 2), Fraction(5, 3)
    assert fm.homogenized_jacobi(0, l1, l2, x, y) == 1
    assert fm.homogenized_jacobi(1, l1, l2, x, y) == y.scale(l1) - x.scale(l2)
    for k in range(6):
        h = fm.homogenized_jacobi(k, l1, l2, x, y)
        # at xI = 0 only the pure xJ term survives; its coefficient is P_k(1)
        assert h.substitute({"x": Poly.zero(vs)}) == (y ** k).scale(pochhammer(l1, k) / math.factorial(k))


def test_classical_value_examples():
    p = ParameterSet.of(Fraction(1, 2), Fraction(3, 2))
    for l in range(5):
        assert fm.classical_value("hahn", 0, l, p, 4) == 1
        assert fm.classical_value("hahn", l, 0, p, 4) == 1
    assert fm.classical_value("racah", 1, 1, ParameterSet.of(1, 1, 1), 1) == Fraction(-1, 3)


def test_recurrence_examples():
    r = fm.recurrence_data("hahn", ParameterSet.of(1, 2), 2)
    assert r.B(2) == 0 and r.D(0) == 0
    assert r.A(0) == Fraction(-2, 3)


FAMILIES = [("hahn", ParameterSet.of(Fraction(1, 2), Fraction(3, 2))),
            ("racah", ParameterSet.of(Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)))]


def _eigen_x(family, p, x):
    return Fraction(x) if family == "hahn" else x * (x + p[1] + p[2] - 1)


def _eigen_k(family, p, k):
    return k * (k + p[1] + p[2] - 1) if family == "hahn" else k * (k + p[2] + p[3] - 1)


@pytest.mark.parametrize("family,p", FAMILIES)
def test_difference_equation_on_grid(family, p):
    N = 5
    r = fm.recurrence_data(family, p, N)
    Q = lambda k, x: fm.classical_value(family, k, x, p, N) if 0 <= x <= N else Fraction(0)
    for k in range(N + 1):
        for x in range(N + 1):
            lhs = r.B(x) * Q(k, x + 1) + r.M(x) * Q(k, x) + r.D(x) * Q(k, x - 1)
            assert lhs == _eigen_k(family, p, k) * Q(k, x)


@pytest.mark.parametrize("family,p", FAMILIES)
def test_recurrence_relation_on_grid(family, p):
    N = 5
    r = fm.recurrence_data(family, p, N)
    Q = lambda k, x: fm.classical_value(family, k, x, p, N) if 0 <= k <= N else Fraction(0)
    for x in range(N + 1):
        for k in range(N + 1):
            lhs = r.A(k) * Q(k + 1, x) + r.Nk(k) * Q(k, x) + r.C(k) * Q(k - 1, x)
            assert lhs == _eigen_x(family, p, x) * Q(k, x)


def test_difference_coefficients_match_grid_values():
    p = ParameterSet.of(Fraction(2, 5), Fraction(3, 2), Fraction(7, 3))
    B, D = fm.difference_coefficients("racah", p, 4)
    r = fm.recurrence_data("racah", p, 4)
    assert [B.eval(x) for x in range(5)] == list(r.B_values)
    assert [D.eval(x) for x in range(5)] == list(r.D_values)


def test_grid_keeps_d0_zero_when_factor_cancels():
    # lam1 + lam2 = 2 cancels x against the denominator in the rational function
    p = FAMILIES[1][1]
    _, D = fm.difference_coefficients("racah", p, 4)
    assert D.eval(0) != 0
    assert fm.recurrence_data("racah", p, 4).D(0) == 0


def test_transition_table_examples():
    t = fm.transition_table("hahn", ParameterSet.of(1, 2), 3)
    assert t.gamma == Fraction(5, 2) and t.product_identities_hold
    assert t.renormalised[0][0] == 1
    assert fm.transition_table("racah", ParameterSet.of(1, 1, 1), 1).gamma == 4


@pytest.mark.parametrize("family", ["hahn", "racah"])
@pytest.mark.parametrize("seed", range(3))
def test_closed_forms_match_products(family, seed):
    n = 2 if family == "hahn" else 3
    N = 6
    p = sample_parameters(n, N, seed, family)
    r = fm.recurrence_data(family, p, N)
    for j in range(N + 1):
        assert r.bd_ratio(j) == fm.bd_ratio_closed(family, p, N, j)
        assert r.ac_ratio(j) == fm.ac_ratio_closed(family, p, N, j)
    lhs, rhs = fm.gamma_sum_identity(family, p, N)
    assert lhs == rhs


def test_convolution_matrices_are_inverse():
    p = ParameterSet.of(Fraction(2, 5), Fraction(7, 3), Fraction(3, 4))
    for build in (lambda inv: fm.hahn_convolution_matrix(ParameterSet(p.lambdas[:2]), 5, inv),
                  lambda inv: fm.racah_convolution_matrix(p, 5, inv)):
        F, G = build(False), build(True)
        n = len(F)
        prod = [[sum(F[i][j] * G[j][k] for j in range(n)) for k in range(n)] for i in range(n)]
        assert prod == [[int(i == k) for k in range(n)] for i in range(n)]


def test_table_json_round_trip():
    import json
    doc = json.loads(fm.transition_table("hahn", ParameterSet.of(1, 2), 2).to_json())
    assert doc["gamma"] == "2" or Fraction(doc["gamma"]) == fm.gamma_closed("hahn", ParameterSet.of(1, 2), 2)
    assert len(doc["values"]) == 3
