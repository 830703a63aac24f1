"""Exact linear operators on polynomial spaces.

Two operator kinds are provided:

* :class:`DiffOp` -- finite sums ``sum_a c_a(x) * d^a`` with polynomial
  coefficients written to the left of the derivatives;
* :class:`ShiftOp` -- finite sums ``sum_m c_m(x) * T^m`` in one variable, where
  ``T^m f(x) = f(x + m)`` and the coefficients are rational functions.

Both kinds support ``+``, ``-``, scalar multiplication, composition via ``*``
and application via ``op(p)``. Scalars added to an operator mean scalar
multiples of the identity.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from . import families
from .errors import EmptySubset, KindMismatch, VarSetMismatch
from .exactnum import ParameterSet, RationalLike, format_rational, rat, require_admissible
from .polyalg import Poly, RatFunc, gradlex_key, monomials_up_to, variables
from .report import Report

Scalar = (int, Fraction)


class _LinearOp:
    """Shared sum-of-terms arithmetic; subclasses define composition and action."""

    __slots__ = ("vars", "terms")

    def _same(self, other) -> None:
        if type(self) is not type(other):
            raise KindMismatch(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if self.vars != other.vars:
            raise VarSetMismatch(f"{self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, Scalar):
            return self.identity(self.vars).scale(other)
        if isinstance(other, _LinearOp):
            self._same(other)
            return other
        return self.multiplication(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out[k] + c if k in out else c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return type(self)._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: RationalLike):
        c = rat(c)
        if not c:
            return type(self)._raw(self.vars, {})
        return type(self)._raw(self.vars, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        return self.compose(self._lift(other))

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        return self._lift(other).compose(self)

    def commutator(self, other):
        other = self._lift(other)
        return self.compose(other) - other.compose(self)

    def anticommutator(self, other):
        other = self._lift(other)
        return self.compose(other) + other.compose(self)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            other = self._lift(other)
        if type(self) is not type(other):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.vars, frozenset(self.terms.items())))

    def __call__(self, p):
        return self.apply(p)


class DiffOp(_LinearOp):
    __slots__ = ()

    def __init__(self, variables: Sequence[str], terms=()):
        self.vars = tuple(variables)
        clean = {}
        for alpha, c in dict(terms).items():
            alpha = tuple(alpha)
            if len(alpha) != len(self.vars):
                raise ValueError(f"derivative index {alpha} does not match {self.vars}")
            if isinstance(c, Scalar):
                c = Poly.const(self.vars, c)
            if c.vars != self.vars:
                raise VarSetMismatch(f"{c.vars} vs {self.vars}")
            if not c.is_zero():
                clean[alpha] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        op = cls.__new__(cls)
        op.vars = variables
        op.terms = terms
        return op

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "DiffOp":
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): Poly.const(variables, 1)})

    @classmethod
    def multiplication(cls, p: Poly) -> "DiffOp":
        if not isinstance(p, Poly):
            raise KindMismatch(f"cannot use {type(p).__name__} as a differential operator")
        return cls._raw(p.vars, {(0,) * len(p.vars): p} if p else {})

    @classmethod
    def partial(cls, variables: Sequence[str], name: str, order: int = 1) -> "DiffOp":
        variables = tuple(variables)
        alpha = tuple(order if v == name else 0 for v in variables)
        return cls._raw(variables, {alpha: Poly.const(variables, 1)})

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def apply(self, p: Poly) -> Poly:
        if not isinstance(p, Poly):
            raise KindMismatch("differential operators act on Poly values")
        if p.vars != self.vars:
            raise VarSetMismatch(f"{p.vars} vs {self.vars}")
        out = Poly.zero(self.vars)
        for alpha, c in self.terms.items():
            d = p.diff_multi(alpha)
            if d:
                out = out + c * d
        return out

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered product: derivatives of ``self`` are moved past ``other``'s coefficients."""
        self._same(other)
        out: dict = {}
        for alpha, ca in self.terms.items():
            for beta, cb in other.terms.items():
                for gamma, mult in _sub_indices(alpha):
                    d = cb.diff_multi(gamma)
                    if not d:
                        continue
                    idx = tuple(a - g + b for a, g, b in zip(alpha, gamma, beta))
                    term = (ca * d).scale(mult)
                    prev = out.get(idx)
                    out[idx] = term if prev is None else prev + term
        return DiffOp._raw(self.vars, {k: v for k, v in out.items() if v})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=gradlex_key):
            d = "*".join(f"d{v}" if a == 1 else f"d{v}^{a}" for v, a in zip(self.vars, alpha) if a)
            c = str(self.terms[alpha])
            parts.append(f"({c}) {d}" if d else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__


@lru_cache(maxsize=None)
def _sub_indices(alpha: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All ``gamma <= alpha`` with the Leibniz multiplicity ``prod C(alpha_i, gamma_i)``."""
    combos = [()]
    for a in alpha:
        combos = [c + (g,) for c in combos for g in range(a + 1)]
    return tuple((g, math.prod(math.comb(a, gi) for a, gi in zip(alpha, g))) for g in combos)


class ShiftOp(_LinearOp):
    """Univariate difference operator ``sum_m c_m(x) T^m``."""

    __slots__ = ()

    def __init__(self, var: str, terms=()):
        self.vars = (var,)
        clean = {}
        for m, c in dict(terms).items():
            c = RatFunc.lift(c, self.vars)
            if c.vars != self.vars:
                raise VarSetMismatch(f"{c.vars} vs {self.vars}")
            if not c.is_zero():
                clean[int(m)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        op = cls.__new__(cls)
        op.vars = variables
        op.terms = terms
        return op

    @classmethod
    def identity(cls, variables) -> "ShiftOp":
        variables = tuple(variables)
        return cls._raw(variables, {0: RatFunc.lift(1, variables)})

    @classmethod
    def multiplication(cls, f) -> "ShiftOp":
        if not isinstance(f, (Poly, RatFunc)):
            raise KindMismatch(f"cannot use {type(f).__name__} as a shift operator")
        f = RatFunc.lift(f, f.vars)
        return cls._raw(f.vars, {0: f} if f else {})

    @classmethod
    def shift(cls, var: str, m: int) -> "ShiftOp":
        return cls(var, {m: 1})

    def apply(self, p):
        """Act on a univariate Poly or RatFunc; returns a Poly whenever the result is one."""
        if isinstance(p, Poly):
            p = RatFunc.lift(p, p.vars)
        if not isinstance(p, RatFunc):
            raise KindMismatch("shift operators act on univariate polynomials")
        if p.vars != self.vars:
            raise VarSetMismatch(f"{p.vars} vs {self.vars}")
        out = RatFunc.lift(0, self.vars)
        for m, c in self.terms.items():
            out = out + c * p.shift(m)
        return out.num if out.is_polynomial() else out

    def compose(self, other: "ShiftOp") -> "ShiftOp":
        self._same(other)
        out: dict = {}
        for m, ca in self.terms.items():
            for k, cb in other.terms.items():
                term = ca * cb.shift(m)
                prev = out.get(m + k)
                out[m + k] = term if prev is None else prev + term
        return ShiftOp._raw(self.vars, {k: v for k, v in out.items() if v})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            t = "" if m == 0 else f" T^{m}"
            parts.append(f"({self.terms[m]}){t}")
        return " + ".join(parts)

    __repr__ = __str__


def op_apply(op, p):
    return op.apply(p)


def op_compose(a, b):
    return a.compose(b)


def op_commutator(a, b):
    return a.commutator(b)


# -- sl2 realisation -------------------------------------------------------------

def verma_generators(vars_: Sequence[str], i: int, lam: RationalLike) -> tuple[DiffOp, DiffOp, DiffOp]:
    """``H = lam + 2 x d``, ``E = x``, ``F = -x d^2 - lam d`` in the ``i``-th variable (1-based)."""
    vars_ = tuple(vars_)
    lam = rat(lam)
    name = vars_[i - 1]
    x = Poly.var(vars_, name)
    d1 = DiffOp.partial(vars_, name, 1)
    d2 = DiffOp.partial(vars_, name, 2)
    H = lam + 2 * (x * d1)
    E = DiffOp.multiplication(x)
    F = -(x * d2) - lam * d1
    return H, E, F


def diagonal_generators(params: ParameterSet, subset: Iterable[int]) -> tuple[DiffOp, DiffOp, DiffOp]:
    subset = sorted(set(subset))
    if not subset:
        raise EmptySubset("the diagonal embedding needs a non-empty subset")
    vars_ = variables(params.n)
    zero = DiffOp._raw(vars_, {})
    H, E, F = zero, zero, zero
    for i in subset:
        h, e, f = verma_generators(vars_, i, params[i])
        H, E, F = H + h, E + e, F + f
    return H, E, F


def casimir(subset: Iterable[int], params: ParameterSet, shifted: bool = True) -> DiffOp:
    """Intermediate Casimir ``(H^2 + 2H)/4 + F E`` of the sub-embedding indexed by ``subset``.

    With ``shifted=True`` the lowest-weight scalar ``lam_I (lam_I - 2) / 4`` is
    subtracted, so single-index Casimirs vanish.
    """
    key = tuple(sorted(set(subset)))
    if not key:
        raise EmptySubset("Casimir of the empty subset")
    return _casimir_cached(key, params.lambdas, shifted)


@lru_cache(maxsize=4096)
def _casimir_cached(subset: tuple[int, ...], lambdas: tuple[Fraction, ...], shifted: bool) -> DiffOp:
    params = ParameterSet(lambdas)
    H, E, F = diagonal_generators(params, subset)
    C = (H * H + 2 * H).scale(Fraction(1, 4)) + F * E
    if shifted:
        lam = params.subset_sum(subset)
        C = C - lam * (lam - 2) / 4
    return C


def euler_operator(vars_: Sequence[str], names: Iterable[str] | None = None) -> DiffOp:
    """``sum x_i d_i`` over ``names`` (default: all variables)."""
    vars_ = tuple(vars_)
    names = vars_ if names is None else tuple(names)
    out = DiffOp._raw(vars_, {})
    for v in names:
        out = out + Poly.var(vars_, v) * DiffOp.partial(vars_, v)
    return out


def jacobi_operator(lam: RationalLike, lamp: RationalLike, vars_: Sequence[str], var: str | None = None) -> DiffOp:
    """``(x^2 - 1) d^2 + (lam - lam' + (lam + lam') x) d`` in variable ``var``."""
    vars_ = tuple(vars_)
    var = var or vars_[0]
    lam, lamp = rat(lam), rat(lamp)
    x = Poly.var(vars_, var)
    second = x * x - 1
    first = (lam + lamp) * x + (lam - lamp)
    return second * DiffOp.partial(vars_, var, 2) + first * DiffOp.partial(vars_, var, 1)


def hahn_sl2_realisation(params: ParameterSet) -> tuple[DiffOp, DiffOp, DiffOp]:
    """``(X, Y, h12)`` acting on polynomials in ``x1, x2``.

    ``X = (H x 1 - lam1)/2``, ``Y`` the shifted diagonal Casimir and
    ``h12 = (delta(H) - lam1 - lam2)/2``.
    """
    if params.n != 2:
        raise ValueError("the Hahn realisation uses two tensor factors")
    vars_ = variables(2)
    H1, _, _ = verma_generators(vars_, 1, params[1])
    X = (H1 - params[1]).scale(Fraction(1, 2))
    Y = casimir((1, 2), params)
    H, _, _ = diagonal_generators(params, (1, 2))
    h12 = (H - params[1] - params[2]).scale(Fraction(1, 2))
    return X, Y, h12


def racah_sl2_realisation(params: ParameterSet) -> tuple[DiffOp, DiffOp, DiffOp]:
    """``(C'_12, C'_23, C'_123)`` acting on polynomials in ``x1, x2, x3``."""
    if params.n != 3:
        raise ValueError("the Racah realisation uses three tensor factors")
    return casimir((1, 2), params), casimir((2, 3), params), casimir((1, 2, 3), params)


# -- difference operators from the polynomial families ------------------------

def hahn_difference_ops(params: ParameterSet, N: int, var: str = "x") -> tuple[ShiftOp, ShiftOp]:
    """``X = x`` and ``Y = B T+ + M + D T-`` for the Hahn polynomials."""
    require_admissible(params, N, "hahn")
    B, D = families.difference_coefficients("hahn", params, N, var)
    X = ShiftOp.multiplication(Poly.var((var,), var))
    return X, _three_term(var, B, D)


def racah_difference_ops(params: ParameterSet, N: int, var: str = "x") -> tuple[ShiftOp, ShiftOp]:
    """``X = x (x + lam1 + lam2 - 1)`` and the Racah three-term difference operator."""
    require_admissible(params, N, "racah")
    B, D = families.difference_coefficients("racah", params, N, var)
    x = Poly.var((var,), var)
    X = ShiftOp.multiplication(x * (x + params[1] + params[2] - 1))
    return X, _three_term(var, B, D)


def _three_term(var: str, B: RatFunc, D: RatFunc) -> ShiftOp:
    return ShiftOp(var, {1: B, 0: -B - D, -1: D})


def hahn_jacobi_pair(params: ParameterSet, N: int, var: str = "v") -> tuple[DiffOp, DiffOp]:
    """One-variable pair ``X = N(1-v)/2 - (1-v)(1+v) d/2`` and ``Y`` the Jacobi operator."""
    require_admissible(params, N, "hahn")
    vars_ = (var,)
    v = Poly.var(vars_, var)
    one_minus = 1 - v
    X = (one_minus.scale(Fraction(N, 2))
         - (one_minus * (1 + v)).scale(Fraction(1, 2)) * DiffOp.partial(vars_, var))
    Y = jacobi_operator(params[1], params[2], vars_, var)
    return X, Y


# -- algebra relations -----------------------------------------------------------

Central = Union[Fraction, int, DiffOp]


@dataclass(frozen=True)
class AlgebraRelations:
    """Structure constants of the Hahn or Racah algebra.

    ``N`` is the level. For realisations where the level is a central
    operator rather than a number, pass it as ``central``: for Hahn it plays
    the role of ``N`` itself, for Racah it is the shifted total Casimir, on
    which ``a1``, ``a3`` and ``b3`` depend linearly.
    """

    family: str
    params: ParameterSet
    N: Fraction | None = None
    central: DiffOp | None = None

    def __post_init__(self):
        if self.family not in ("hahn", "racah"):
            raise ValueError(f"unknown family {self.family!r}")
        if (self.N is None) == (self.central is None):
            raise ValueError("give exactly one of N and central")
        if self.N is not None:
            object.__setattr__(self, "N", rat(self.N))

    # Racah constants, verbatim in terms of N
    def racah_constants(self) -> dict[str, Fraction]:
        l1, l2, l3 = self.params.lambdas
        N = self.N
        S = l1 + l2 + l3
        return {
            "a1": (l2 - 2 * N) * (S + N - 1) - l2 * (N + 1) - l1 * l3,
            "a2": (l1 + l2) * (l1 + l2 - 2),
            "a3": -l2 * N * (S + N - 1) * (l1 + l2 - 2),
            "b2": (l2 + l3) * (l2 + l3 - 2),
            "b3": -l2 * N * (S + N - 1) * (l2 + l3 - 2),
        }

    def _racah_terms(self):
        l1, l2, l3 = self.params.lambdas
        S = l1 + l2 + l3
        if self.central is None:
            c = self.racah_constants()
            return c["a1"], c["a2"], c["a3"], c["b2"], c["b3"]
        Cp = self.central
        # with C' = N (S + N - 1) the constants are affine in C'
        a1 = l2 * S - 2 * l2 - l1 * l3 - 2 * Cp
        a3 = -l2 * (l1 + l2 - 2) * Cp
        b3 = -l2 * (l2 + l3 - 2) * Cp
        return a1, (l1 + l2) * (l1 + l2 - 2), a3, (l2 + l3) * (l2 + l3 - 2), b3

    def residuals(self, X, Y):
        """Return ``([X,Z] - rhs1, [Y,Z] - rhs2)`` with ``Z = [X, Y]``."""
        Z = X.commutator(Y)
        XZ, YZ = X.commutator(Z), Y.commutator(Z)
        if self.family == "hahn":
            l1, l2 = self.params.lambdas
            Nc = self.N if self.central is None else self.central
            rhs1 = 2 * (X * X) + (l1 - l2 - 2 * Nc) * X + Y - l1 * Nc
            rhs2 = (-2 * X.anticommutator(Y) - (l1 + l2) * (l1 + l2 - 2) * X
                    - (l1 - l2 - 2 * Nc) * Y + l1 * (l1 + l2 - 2) * Nc)
        else:
            a1, a2, a3, b2, b3 = self._racah_terms()
            XY = X.anticommutator(Y)
            rhs1 = 2 * (X * X) + 2 * XY + a1 * X + a2 * Y + a3
            rhs2 = -2 * (Y * Y) - 2 * XY - a1 * Y - b2 * X - b3
        return XZ - rhs1, YZ - rhs2


def hahn_relations(params: ParameterSet, N) -> AlgebraRelations:
    if isinstance(N, DiffOp):
        return AlgebraRelations("hahn", params, central=N)
    return AlgebraRelations("hahn", params, N=N)


def racah_relations(params: ParameterSet, N) -> AlgebraRelations:
    if isinstance(N, DiffOp):
        return AlgebraRelations("racah", params, central=N)
    return AlgebraRelations("racah", params, N=N)


def default_test_vectors(op, D: int) -> list:
    """Monomials of total degree ``<= D`` in the operator's variables."""
    return [Poly.monomial(op.vars, m) for m in monomials_up_to(len(op.vars), D)]


def check_algebra_relations(X, Y, relations: AlgebraRelations, D: int = 8,
                            test_vectors: Sequence | None = None,
                            suite: str | None = None, seed: int | None = None) -> Report:
    """Check the two non-trivial relations both as operator identities and by action.

    The operator check compares normal forms. The action check applies each
    residual to ``test_vectors`` (default: every monomial of degree ``<= D``);
    pass explicit vectors to restrict to an invariant subspace such as a
    fixed eigenspace of the central element. The normal-form check is only
    reported when no restriction is requested.
    """
    start = time.perf_counter()
    if type(X) is not type(Y):
        raise KindMismatch("X and Y must be operators of the same kind")
    restricted = test_vectors is not None
    vectors = list(test_vectors) if restricted else default_test_vectors(X, D)
    r1, r2 = relations.residuals(X, Y)
    scope = {"D": D}
    if relations.N is not None:
        scope["N"] = format_rational(relations.N)
    report = Report(suite or f"{relations.family}-algebra", relations.params.to_strings(), scope, seed)
    for name, res in (("[X,Z]", r1), ("[Y,Z]", r2)):
        if not restricted:
            report.add(f"normal form {name}", res.is_zero(),
                       None if res.is_zero() else f"residual operator: {_clip(str(res))}")
        failure = None
        for k, vec in enumerate(vectors):
            out = res.apply(vec)
            if not _is_zero(out):
                failure = f"vector #{k} = {_clip(str(vec))} -> {_clip(str(out))}"
                break
        label = "eigenspace" if restricted else f"monomials deg<={D}"
        report.add(f"action {name} on {label}", failure is None, failure)
    report.finish(start)
    return report


def _is_zero(value) -> bool:
    return value.is_zero()


def _clip(text: str, limit: int = 400) -> str:
    return text if len(text) <= limit else text[:limit] + " ..."
