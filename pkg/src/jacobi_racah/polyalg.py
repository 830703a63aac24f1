"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is a dictionary from exponent tuples to non-zero Fractions,
tied to an ordered tuple of variable names. Monomials are ordered
graded-lexicographically with respect to that tuple; this order drives the
text form and the pivot choice in :func:`expand_in_basis`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import DependentBasis, MissingVariable, NotInSpan, VarSetMismatch
from .exactnum import RationalLike, format_rational, rat

Monomial = tuple[int, ...]


def gradlex_key(mono: Monomial):
    """Sort key putting monomials in descending graded-lex order."""
    return (-sum(mono), tuple(-e for e in mono))


class Poly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, RationalLike] = ()):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable names in {self.vars}")
        clean = {}
        for mono, c in dict(terms).items():
            if len(mono) != len(self.vars):
                raise ValueError(f"exponent {mono} does not match variables {self.vars}")
            c = rat(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "Poly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        return p

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, variables: Sequence[str], c: RationalLike) -> "Poly":
        variables = tuple(variables)
        c = rat(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise MissingVariable(name)
        mono = tuple(int(v == name) for v in variables)
        return cls._raw(variables, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], mono: Monomial, c: RationalLike = 1) -> "Poly":
        return cls(variables, {tuple(mono): c})

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: gradlex_key(t[0]))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise VarSetMismatch(f"{self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c: RationalLike) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.vars)
        return Poly._raw(self.vars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.vars, {m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.vars, other).terms
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution -----------------------------------------
    def diff(self, i: int, order: int = 1) -> "Poly":
        """Partial derivative of the given order in variable index ``i``."""
        if order == 0:
            return self
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e < order:
                continue
            f = math.perm(e, order)
            nm = m[:i] + (e - order,) + m[i + 1:]
            out[nm] = c * f
        return Poly._raw(self.vars, out)

    def diff_multi(self, alpha: Monomial) -> "Poly":
        out = self
        for i, a in enumerate(alpha):
            if a:
                out = out.diff(i, a)
                if not out.terms:
                    break
        return out

    def eval(self, point: Mapping[str, RationalLike]) -> Fraction:
        missing = [v for i, v in enumerate(self.vars)
                   if v not in point and any(m[i] for m in self.terms)]
        if missing:
            raise MissingVariable(", ".join(missing))
        vals = [rat(point[v]) if v in point else Fraction(0) for v in self.vars]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t *= v ** e
            total += t
        return total

    def substitute(self, mapping: Mapping[str, "Poly"], target_vars: Sequence[str] | None = None) -> "Poly":
        """Replace variables by polynomials over ``target_vars`` (default: same variables)."""
        target = tuple(target_vars) if target_vars is not None else self.vars
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if img.vars != target:
                    raise VarSetMismatch(f"{img.vars} vs {target}")
            else:
                img = Poly.var(target, v)
            images.append(img)
        powers: list[dict[int, Poly]] = [{} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        out = Poly.zero(target)
        for m, c in self.terms.items():
            t = Poly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            out = out + t
        return out

    def shift(self, i: int, amount: RationalLike) -> "Poly":
        """``p(..., x_i + amount, ...)``."""
        amount = rat(amount)
        if not amount:
            return self
        out: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            for j in range(e + 1):
                coef = c * math.comb(e, j) * amount ** (e - j)
                nm = m[:i] + (j,) + m[i + 1:]
                out[nm] = out.get(nm, 0) + coef
        return Poly._raw(self.vars, {m: c for m, c in out.items() if c})

    def homogeneous_component(self, d: int) -> "Poly":
        return Poly._raw(self.vars, {m: c for m, c in self.terms.items() if sum(m) == d})

    # -- text ---------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e)
            parts.append(f"{format_rational(c)} * {mono}" if mono else format_rational(c))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.vars!r}, {str(self)!r})"


def variables(n: int, prefix: str = "x") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree <= ``degree``, in ascending graded-lex order."""
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def monomials_of_degree(nvars: int, d: int) -> list[Monomial]:
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        out.append(tuple(m))
    return sorted(out, key=gradlex_key)


def homogeneous_component(p: Poly, d: int) -> Poly:
    return p.homogeneous_component(d)


def poly_eval(p: Poly, point: Mapping[str, RationalLike]) -> Fraction:
    return p.eval(point)


def poly_arith(a: Poly, b: Poly | None, op: str, c: RationalLike | None = None) -> Poly:
    """Functional front end to the operators on :class:`Poly`."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(c)
    raise ValueError(f"unknown operation {op!r}")


def expand_in_basis(target: Poly, basis: Sequence[Poly]) -> list[Fraction]:
    """Coefficients ``c`` with ``target == sum(c[k] * basis[k])``.

    Basis rows are reduced in input order, each pivoting on its leading
    monomial in graded-lex order. A row that reduces to zero raises
    :class:`DependentBasis`; a non-zero remainder of the target raises
    :class:`NotInSpan`.
    """
    if not basis:
        raise ValueError("empty basis")
    for b in basis:
        target._check(b)
    nb = len(basis)
    # each pivot row: (leading monomial, reduced row terms, combination over basis)
    pivots: list[tuple[Monomial, dict, dict]] = []

    def reduce(row: dict, combo: dict):
        for lead, prow, pcombo in pivots:
            c = row.get(lead)
            if not c:
                continue
            for m, v in prow.items():
                s = row.get(m, 0) - c * v
                if s:
                    row[m] = s
                else:
                    row.pop(m, None)
            for k, v in pcombo.items():
                s = combo.get(k, 0) - c * v
                if s:
                    combo[k] = s
                else:
                    combo.pop(k, None)
        return row, combo

    for idx, b in enumerate(basis):
        row, combo = reduce(dict(b.terms), {idx: Fraction(1)})
        if not row:
            raise DependentBasis(f"basis element {idx} lies in the span of the previous ones")
        lead = min(row, key=gradlex_key)
        inv = 1 / row[lead]
        row = {m: v * inv for m, v in row.items()}
        combo = {k: v * inv for k, v in combo.items()}
        # keep pivots fully reduced so later rows stay sparse
        for j, (plead, prow, pcombo) in enumerate(pivots):
            c = prow.get(lead)
            if c:
                for m, v in row.items():
                    s = prow.get(m, 0) - c * v
                    if s:
                        prow[m] = s
                    else:
                        prow.pop(m, None)
                for k, v in combo.items():
                    s = pcombo.get(k, 0) - c * v
                    if s:
                        pcombo[k] = s
                    else:
                        pcombo.pop(k, None)
        pivots.append((lead, row, combo))

    remainder = dict(target.terms)
    coeffs = [Fraction(0)] * nb
    for lead, prow, pcombo in pivots:
        c = remainder.get(lead)
        if not c:
            continue
        for m, v in prow.items():
            s = remainder.get(m, 0) - c * v
            if s:
                remainder[m] = s
            else:
                remainder.pop(m, None)
        for k, v in pcombo.items():
            coeffs[k] += c * v
    if remainder:
        raise NotInSpan(f"target has a component outside the span: {Poly._raw(target.vars, remainder)}")
    return coeffs


def combine(coeffs: Sequence[RationalLike], basis: Sequence[Poly]) -> Poly:
    out = Poly.zero(basis[0].vars)
    for c, b in zip(coeffs, basis):
        out = out + b.scale(c)
    return out


# -- univariate helpers and rational functions --------------------------------

def _udeg(p: Poly) -> int:
    return p.degree()


def _ulead(p: Poly) -> Fraction:
    return p.terms[(p.degree(),)]


def udivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division of univariate polynomials."""
    if len(a.vars) != 1:
        raise ValueError("udivmod needs univariate polynomials")
    a._check(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    db, lb = _udeg(b), _ulead(b)
    q: dict = {}
    r = dict(a.terms)
    while r:
        dr = max(m[0] for m in r)
        if dr < db:
            break
        c = r[(dr,)] / lb
        shift = dr - db
        q[(shift,)] = c
        for (e,), v in b.terms.items():
            m = (e + shift,)
            s = r.get(m, 0) - c * v
            if s:
                r[m] = s
            else:
                r.pop(m, None)
    return Poly._raw(a.vars, q), Poly._raw(a.vars, r)


def ugcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of univariate polynomials (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, udivmod(a, b)[1]
    if a.is_zero():
        return a
    return a.scale(1 / _ulead(a))


class RatFunc:
    """Univariate rational function ``num / den`` in lowest terms, ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if len(num.vars) != 1:
            raise ValueError("rational functions are univariate here")
        if den is None:
            den = Poly.const(num.vars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.const(num.vars, 1)
        elif not reduced:
            g = ugcd(num, den)
            if g.degree() > 0:
                num = udivmod(num, g)[0]
                den = udivmod(den, g)[0]
            lc = _ulead(den)
            if lc != 1:
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @property
    def vars(self):
        return self.num.vars

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    @classmethod
    def lift(cls, value, variables) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Poly):
            return cls(value, reduced=True)
        return cls(Poly.const(variables, value), reduced=True)

    def __add__(self, other) -> "RatFunc":
        other = RatFunc.lift(other, self.vars)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.lift(other, self.vars))

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = RatFunc.lift(other, self.vars)
        if self.is_polynomial() and other.is_polynomial():
            return RatFunc(self.num * other.num, reduced=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def shift(self, amount: RationalLike) -> "RatFunc":
        return RatFunc(self.num.shift(0, amount), self.den.shift(0, amount), reduced=True)

    def eval(self, x: RationalLike) -> Fraction:
        v = self.vars[0]
        d = self.den.eval({v: x})
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num.eval({v: x}) / d

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc.lift(other, self.vars)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    __repr__ = __str__
