"""Jacobi, Hahn and Racah polynomials with their recurrence and transition data."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ZeroDenominator
from .exactnum import (ParameterSet, RationalLike, format_rational, gen_binomial,
                       hyp_terminating, pochhammer, rat, require_admissible)
from .polyalg import Poly, RatFunc

FAMILIES = ("hahn", "racah")


def jacobi_poly(l: int, lam: RationalLike, lamp: RationalLike,
                vars_: tuple[str, ...] = ("x",), var: str | None = None) -> Poly:
    """Degree-``l`` Jacobi polynomial ``P_l^{lam, lam'}`` from the binomial sum form.

    Parameters are shifted by one from the classical ``alpha, beta``
    (``alpha = lam - 1``), so ``P_l(1) = (lam)_l / l!``.
    """
    vars_ = tuple(vars_)
    var = var or vars_[0]
    x = Poly.var(vars_, var)
    one_minus, one_plus = 1 - x, 1 + x
    out = Poly.zero(vars_)
    for s in range(l + 1):
        c = gen_binomial(l + rat(lam) - 1, l - s) * gen_binomial(l + rat(lamp) - 1, s)
        if c:
            out = out + (one_minus ** s * one_plus ** (l - s)).scale(c * (-1) ** s)
    return out.scale(Fraction(1, 2 ** l))


def jacobi_poly_hypergeometric(l: int, lam: RationalLike, lamp: RationalLike,
                               vars_: tuple[str, ...] = ("x",), var: str | None = None) -> Poly:
    """The same polynomial from the terminating 2F1 in ``(1 - x)/2``; needs ``(lam)_n != 0``."""
    vars_ = tuple(vars_)
    var = var or vars_[0]
    lam, lamp = rat(lam), rat(lamp)
    z = (1 - Poly.var(vars_, var)).scale(Fraction(1, 2))
    out = Poly.zero(vars_)
    term = Fraction(1)
    for n in range(l + 1):
        out = out + (z ** n).scale(term)
        den = (lam + n) * (n + 1)
        if not den:
            raise ZeroDenominator(f"(lam)_n vanishes at n={n + 1}")
        term = term * (-l + n) * (l + lam + lamp - 1 + n) / den
    return out.scale(pochhammer(lam, l) / math.factorial(l))


def homogenized_jacobi(k: int, lam_I: RationalLike, lam_J: RationalLike, xI: Poly, xJ: Poly) -> Poly:
    """``(xI + xJ)^k P_k^{lam_I, lam_J}((xJ - xI)/(xI + xJ))`` with denominators cleared."""
    out = Poly.zero(xI.vars)
    lam_I, lam_J = rat(lam_I), rat(lam_J)
    for s in range(k + 1):
        c = gen_binomial(k + lam_I - 1, k - s) * gen_binomial(k + lam_J - 1, s)
        if c:
            out = out + (xI ** s * xJ ** (k - s)).scale(c * (-1) ** s)
    return out


# -- classical values -------------------------------------------------------------

def hahn_value(k: int, x: int, params: ParameterSet, N: int) -> Fraction:
    l1, l2 = params.lambdas
    return hyp_terminating([-k, k + l1 + l2 - 1, -x], [l1, -N], min(k, x), 1)


def racah_value(k: int, x: int, params: ParameterSet, N: int) -> Fraction:
    l1, l2, l3 = params.lambdas
    return hyp_terminating([-k, k + l2 + l3 - 1, -x, x + l1 + l2 - 1],
                           [l2, l1 + l2 + l3 + N - 1, -N], min(k, x), 1)


def classical_value(family: str, k: int, l: int, params: ParameterSet, N: int) -> Fraction:
    """``Q_k(l)`` for Hahn or ``R_k(mu(l))`` for Racah."""
    require_admissible(params, N, _mode(family))
    if not (0 <= k <= N and 0 <= l <= N):
        raise ValueError(f"indices must lie in [0, {N}]")
    return (hahn_value if family == "hahn" else racah_value)(k, l, params, N)


def _mode(family: str) -> str:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    return family


# -- difference / recurrence data ---------------------------------------------

def difference_coefficients(family: str, params: ParameterSet, N: int, var: str = "x") -> tuple[RatFunc, RatFunc]:
    """``B(x)`` and ``D(x)`` of the three-term difference equation as rational functions."""
    vs = (var,)
    x = Poly.var(vs, var)
    if _mode(family) == "hahn":
        l1, l2 = params.lambdas
        B = (x - N) * (x + l1)
        D = x * (x - l2 - N)
        return RatFunc(B), RatFunc(D)
    l1, l2, l3 = params.lambdas
    S = l1 + l2 + l3
    B = RatFunc((x - N) * (x + l2) * (x + l1 + l2 - 1) * (x + S + N - 1),
                (2 * x + l1 + l2 - 1) * (2 * x + l1 + l2))
    D = RatFunc(x * (x + l1 - 1) * (x - l3 - N) * (x + l1 + l2 + N - 1),
                (2 * x + l1 + l2 - 2) * (2 * x + l1 + l2 - 1))
    return B, D


def _hahn_B(params, N):
    l1, l2 = params.lambdas
    return lambda x: (x - N) * (x + l1)


def _hahn_D(params, N):
    l1, l2 = params.lambdas
    return lambda x: x * (x - l2 - N)


def _hahn_A(params, N):
    l1, l2 = params.lambdas
    s = l1 + l2

    def A(k):
        den = (2 * k + s - 1) * (2 * k + s)
        if not den:
            raise ZeroDenominator(f"A_{k} has a vanishing denominator")
        return Fraction((k - N) * (k + l1) * (k + s - 1)) / den
    return A


def _hahn_C(params, N):
    l1, l2 = params.lambdas
    s = l1 + l2

    def C(k):
        if k == 0:
            return Fraction(0)
        den = (2 * k + s - 2) * (2 * k + s - 1)
        if not den:
            raise ZeroDenominator(f"C_{k} has a vanishing denominator")
        return -Fraction(k * (k + l2 - 1) * (k + s + N - 1)) / den
    return C


def _racah_B(params, N):
    l1, l2, l3 = params.lambdas
    S = l1 + l2 + l3

    def B(x):
        den = (2 * x + l1 + l2 - 1) * (2 * x + l1 + l2)
        num = (x - N) * (x + l2) * (x + l1 + l2 - 1) * (x + S + N - 1)
        if not den:
            if not num:
                raise ZeroDenominator(f"B({x}) is 0/0")
            raise ZeroDenominator(f"B({x}) has a vanishing denominator")
        return Fraction(num) / den
    return B


def _racah_D(params, N):
    l1, l2, l3 = params.lambdas

    def D(x):
        num = x * (x + l1 - 1) * (x - l3 - N) * (x + l1 + l2 + N - 1)
        if x == 0:
            return Fraction(0)
        den = (2 * x + l1 + l2 - 2) * (2 * x + l1 + l2 - 1)
        if not den:
            raise ZeroDenominator(f"D({x}) has a vanishing denominator")
        return Fraction(num) / den
    return D


@dataclass(frozen=True)
class RecurrenceData:
    """Grid values of ``B, M, D`` and ``A, N, C`` for ``x, k`` in ``0..N``.

    ``B``, ``D``, ``A`` and ``C`` are also kept as callables so values
    outside the grid (e.g. ``B(-1)``) can be asked for.
    """

    family: str
    params: ParameterSet
    N: int
    B: Callable[[int], Fraction]
    D: Callable[[int], Fraction]
    A: Callable[[int], Fraction]
    C: Callable[[int], Fraction]
    B_values: tuple[Fraction, ...] = field(default=())
    D_values: tuple[Fraction, ...] = field(default=())
    A_values: tuple[Fraction, ...] = field(default=())
    C_values: tuple[Fraction, ...] = field(default=())

    def M(self, x: int) -> Fraction:
        return -self.B(x) - self.D(x)

    def Nk(self, k: int) -> Fraction:
        return -self.A(k) - self.C(k)

    def bd_ratio(self, l: int) -> Fraction:
        """``B(0)...B(l-1) / (D(1)...D(l))`` as a step-by-step product."""
        out = Fraction(1)
        for j in range(l):
            out = out * self.B_values[j] / self.D_values[j + 1]
        return out

    def ac_ratio(self, k: int) -> Fraction:
        """``A_0...A_{k-1} / (C_1...C_k)`` as a step-by-step product."""
        out = Fraction(1)
        for j in range(k):
            out = out * self.A_values[j] / self.C_values[j + 1]
        return out


def recurrence_data(family: str, params: ParameterSet, N: int) -> RecurrenceData:
    require_admissible(params, N, _mode(family))
    if family == "hahn":
        B, D, A, C = _hahn_B(params, N), _hahn_D(params, N), _hahn_A(params, N), _hahn_C(params, N)
    else:
        swapped = params.swapped(1, 3)
        B, D = _racah_B(params, N), _racah_D(params, N)
        A, C = _racah_B(swapped, N), _racah_D(swapped, N)
    grid = range(N + 1)
    return RecurrenceData(
        family, params, N, B, D, A, C,
        tuple(Fraction(B(x)) for x in grid), tuple(Fraction(D(x)) for x in grid),
        tuple(Fraction(A(k)) for k in grid), tuple(Fraction(C(k)) for k in grid))


# -- closed forms --------------------------------------------------------------

def bd_ratio_closed(family: str, params: ParameterSet, N: int, l: int) -> Fraction:
    if family == "hahn":
        l1, l2 = params.lambdas
        return math.comb(N, l) * pochhammer(l1, l) * pochhammer(l2, N - l) / pochhammer(l2, N)
    l1, l2, l3 = params.lambdas
    S = l1 + l2 + l3
    num = math.comb(N, l) * pochhammer(l2, l) * pochhammer(S + N - 1, l) * pochhammer(l1 + l2, N)
    den = (pochhammer(l1, l) * pochhammer(l3 + N - l, l) * pochhammer(l1 + l2 + l - 1, l)
           * pochhammer(l1 + l2 + 2 * l, N - l))
    if not den:
        raise ZeroDenominator(f"closed-form B/D ratio at l={l}")
    return num / den


def ac_ratio_closed(family: str, params: ParameterSet, N: int, k: int) -> Fraction:
    if family == "hahn":
        l1, l2 = params.lambdas
        den = pochhammer(l2, k) * pochhammer(l1 + l2 + k - 1, k) * pochhammer(l1 + l2 + 2 * k, N - k)
        if not den:
            raise ZeroDenominator(f"closed-form A/C ratio at k={k}")
        return math.comb(N, k) * pochhammer(l1, k) * pochhammer(l1 + l2, N) / den
    return bd_ratio_closed("racah", params.swapped(1, 3), N, k)


def gamma_closed(family: str, params: ParameterSet, N: int) -> Fraction:
    if family == "hahn":
        l1, l2 = params.lambdas
        return pochhammer(l1 + l2, N) / pochhammer(l2, N)
    l1, l2, l3 = params.lambdas
    return (pochhammer(l1 + l2, N) * pochhammer(l2 + l3, N)
            / (pochhammer(l1, N) * pochhammer(l3, N)))


def gamma_sum_identity(family: str, params: ParameterSet, N: int) -> tuple[Fraction, Fraction]:
    """Both sides of the non-trivial summation identity implied by the two forms of Gamma."""
    if family == "hahn":
        l1, l2 = params.lambdas
        lhs = sum((math.comb(N, k) * pochhammer(l1, k)
                   / (pochhammer(l2, k) * pochhammer(l1 + l2 + k - 1, k) * pochhammer(l1 + l2 + 2 * k, N - k))
                   for k in range(N + 1)), Fraction(0))
        return lhs, 1 / pochhammer(l2, N)
    l1, l2, l3 = params.lambdas
    S = l1 + l2 + l3
    lhs = sum((math.comb(N, l) * pochhammer(l2, l) * pochhammer(S + N - 1, l)
               / (pochhammer(l1, l) * pochhammer(l3 + N - l, l) * pochhammer(l1 + l2 + l - 1, l)
                  * pochhammer(l1 + l2 + 2 * l, N - l))
               for l in range(N + 1)), Fraction(0))
    return lhs, pochhammer(l2 + l3, N) / (pochhammer(l1, N) * pochhammer(l3, N))


# -- transition tables ------------------------------------------------------------

@dataclass(frozen=True)
class TransitionTable:
    family: str
    params: ParameterSet
    N: int
    values: tuple[tuple[Fraction, ...], ...]
    renormalised: tuple[tuple[Fraction, ...], ...]
    gamma: Fraction
    product_identities_hold: bool

    def to_dict(self) -> dict:
        fmt = lambda rows: [[format_rational(v) for v in row] for row in rows]
        return {
            "family": self.family,
            "params": self.params.to_strings(),
            "N": self.N,
            "values": fmt(self.values),
            "renormalised": fmt(self.renormalised),
            "gamma": format_rational(self.gamma),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def transition_table(family: str, params: ParameterSet, N: int) -> TransitionTable:
    """Values ``[k][l]``, renormalised values and ``Gamma``.

    Renormalised values use step-by-step products of the recurrence data;
    ``product_identities_hold`` records whether those products agree with
    the closed forms for every index.
    """
    rec = recurrence_data(family, params, N)
    value = hahn_value if family == "hahn" else racah_value
    values = tuple(tuple(value(k, l, params, N) for l in range(N + 1)) for k in range(N + 1))
    bd = [rec.bd_ratio(l) for l in range(N + 1)]
    ac = [rec.ac_ratio(k) for k in range(N + 1)]
    tilde = tuple(tuple(bd[l] * ac[k] * values[k][l] for l in range(N + 1)) for k in range(N + 1))
    agree = all(bd[j] == bd_ratio_closed(family, params, N, j)
                and ac[j] == ac_ratio_closed(family, params, N, j) for j in range(N + 1))
    return TransitionTable(family, params, N, values, tilde, gamma_closed(family, params, N), agree)


# -- convolution coefficients --------------------------------------------------

def hahn_convolution_matrix(params: ParameterSet, N: int, inverse: bool = False) -> list[list[Fraction]]:
    """Rows ``l``: coefficients of ``w_l`` on ``v_k`` (or of ``v_l`` on ``w_k`` when ``inverse``)."""
    require_admissible(params, N, "hahn")
    l1, l2 = params.lambdas
    out = []
    for l in range(N + 1):
        row = []
        for k in range(N + 1):
            if not inverse:
                c = pochhammer(l1, l) / math.factorial(l) * math.comb(N, k) * hahn_value(l, k, params, N)
            else:
                c = (math.comb(N, k) * math.factorial(k) * pochhammer(l1, l) * pochhammer(l2, N - l)
                     / (pochhammer(l2, k) * pochhammer(l1 + l2 + k - 1, k) * pochhammer(l1 + l2 + 2 * k, N - k))
                     * hahn_value(k, l, params, N))
            row.append(c)
        out.append(row)
    return out


def racah_convolution_matrix(params: ParameterSet, N: int, inverse: bool = False) -> list[list[Fraction]]:
    """Rows ``l``: coefficients of ``w_l`` on ``v_k`` (or of ``v_l`` on ``w_k`` when ``inverse``)."""
    require_admissible(params, N, "racah")
    l1, l2, l3 = params.lambdas
    S = l1 + l2 + l3
    out = []
    for l in range(N + 1):
        row = []
        for k in range(N + 1):
            if not inverse:
                c = (math.comb(N, l) * pochhammer(l2, l) * pochhammer(l1, N - l) * pochhammer(S + N - 1, k)
                     / (pochhammer(l1, k) * pochhammer(l1 + l2 + k - 1, k) * pochhammer(l1 + l2 + 2 * k, N - k))
                     * racah_value(l, k, params, N))
            else:
                c = (math.comb(N, l) * pochhammer(l2, l) * pochhammer(l3, N - l) * pochhammer(S + N - 1, k)
                     / (pochhammer(l3, k) * pochhammer(l2 + l3 + k - 1, k) * pochhammer(l2 + l3 + 2 * k, N - k))
                     * racah_value(k, l, params, N))
            row.append(c)
        out.append(row)
    return out
