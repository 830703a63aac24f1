"""Exact rational scalars and the special-function kernel.

Every scalar in the package is a :class:`fractions.Fraction`; nothing is
ever converted to floating point.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import InadmissibleParameters, ModeArityMismatch, ZeroDenominator

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def rat(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction; strings use the ``"p/q"`` form."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


def format_rational(q: RationalLike) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    return Fraction(text)


def pochhammer(x: RationalLike, n: int) -> Fraction:
    """Rising factorial ``x (x+1) ... (x+n-1)``."""
    if n < 0:
        raise ValueError("pochhammer length must be non-negative")
    x = rat(x)
    out = Fraction(1)
    for i in range(n):
        out *= x + i
        if not out:
            return out
    return out


def gen_binomial(x: RationalLike, k: int) -> Fraction:
    """Binomial coefficient with arbitrary rational top entry."""
    if k < 0:
        raise ValueError("k must be non-negative")
    x = rat(x)
    return pochhammer(x - k + 1, k) / math.factorial(k)


def hyp_terminating(
    num_params: Sequence[RationalLike],
    den_params: Sequence[RationalLike],
    k: int,
    arg: RationalLike,
) -> Fraction:
    """Sum a hypergeometric series that terminates after the ``n = k`` term.

    One numerator parameter must equal ``-k``. A denominator Pochhammer that
    vanishes before the numerator does raises :class:`ZeroDenominator`.
    """
    nums = [rat(a) for a in num_params]
    dens = [rat(b) for b in den_params]
    arg = rat(arg)
    if k < 0:
        raise ValueError("k must be non-negative")
    if -k not in nums:
        raise ValueError(f"no numerator parameter equals -k = {-k}")
    total = Fraction(0)
    term = Fraction(1)
    for n in range(k + 1):
        total += term
        if n == k:
            break
        top = math.prod(a + n for a in nums)
        if not top:
            break
        bottom = math.prod(b + n for b in dens)
        if not bottom:
            raise ZeroDenominator(f"denominator Pochhammer vanishes at n={n + 1}")
        term = term * top / bottom * arg / (n + 1)
    return total


@dataclass(frozen=True)
class ParameterSet:
    """The ordered weights ``lambda_1 .. lambda_n`` (``n >= 2``)."""

    lambdas: tuple[Fraction, ...]

    def __post_init__(self):
        lams = tuple(rat(v) for v in self.lambdas)
        if len(lams) < 2:
            raise ValueError("a parameter set needs at least two weights")
        object.__setattr__(self, "lambdas", lams)

    @classmethod
    def of(cls, *values: RationalLike) -> "ParameterSet":
        return cls(tuple(rat(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "ParameterSet":
        return cls(tuple(parse_rational(p) for p in text.split(",")))

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def __getitem__(self, i: int) -> Fraction:
        """1-based access, so ``params[1]`` is the first weight."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.lambdas[i - 1]

    def subset_sum(self, subset: Iterable[int]) -> Fraction:
        return sum((self[i] for i in subset), Fraction(0))

    def swapped(self, i: int, j: int) -> "ParameterSet":
        lams = list(self.lambdas)
        lams[i - 1], lams[j - 1] = lams[j - 1], lams[i - 1]
        return ParameterSet(tuple(lams))

    def to_strings(self) -> list[str]:
        return [format_rational(v) for v in self.lambdas]

    def __str__(self) -> str:
        return ",".join(self.to_strings())


@dataclass(frozen=True)
class HigherRank:
    """Admissibility mode for ``n >= 2`` weights at verification degree ``degree``.

    ``subsets`` are the union subsets produced by a coupling scheme; when
    omitted, every subset of size at least two is checked.
    """

    degree: int
    subsets: tuple[frozenset[int], ...] | None = None


def _label(subset: Sequence[int]) -> str:
    return "+".join(f"λ{i}".translate(_SUBSCRIPTS) for i in subset)


def _forbidden(value: Fraction, depth: int) -> bool:
    """True when ``value`` lies in ``{0, -1, ..., -(depth-1)}``."""
    return value.denominator == 1 and -(depth - 1) <= value <= 0


def check_admissible(params: ParameterSet, N: int, mode="hahn") -> list[str]:
    """Return the violated admissibility conditions (empty list when admissible).

    ``mode`` is ``"hahn"`` (two weights), ``"racah"`` (three weights) or a
    :class:`HigherRank` instance, in which case ``N`` is ignored in favour of
    ``mode.degree``.
    """
    if isinstance(mode, HigherRank):
        D = mode.degree
        singles = [(i,) for i in range(1, params.n + 1)]
        if mode.subsets is None:
            unions = [c for r in range(2, params.n + 1)
                      for c in combinations(range(1, params.n + 1), r)]
        else:
            unions = sorted({tuple(sorted(s)) for s in mode.subsets if len(s) >= 2},
                            key=lambda s: (len(s), s))
        single_depth, union_depth = D, 2 * D - 1
    elif mode == "hahn":
        if params.n != 2:
            raise ModeArityMismatch(f"Hahn mode needs 2 weights, got {params.n}")
        singles, unions = [(1,), (2,)], [(1, 2)]
        single_depth, union_depth = N, 2 * N - 1
    elif mode == "racah":
        if params.n != 3:
            raise ModeArityMismatch(f"Racah mode needs 3 weights, got {params.n}")
        singles, unions = [(1,), (2,), (3,)], [(1, 2), (2, 3), (1, 2, 3)]
        single_depth, union_depth = N, 2 * N - 1
    else:
        raise ValueError(f"unknown admissibility mode {mode!r}")

    out = []
    for s in singles:
        if _forbidden(params.subset_sum(s), single_depth):
            out.append(f"{_label(s)} ∈ {{0,…,−(N−1)}}")
    for s in unions:
        if _forbidden(params.subset_sum(s), union_depth):
            out.append(f"{_label(s)} ∈ {{0,…,−(2N−2)}}")
    if isinstance(mode, HigherRank):
        out = [v.replace("N", "D") for v in out]
    return out


def require_admissible(params: ParameterSet, N: int, mode="hahn") -> None:
    violations = check_admissible(params, N, mode)
    if violations:
        raise InadmissibleParameters(violations)


def sample_parameters(
    n: int, N: int, seed: int, mode="hahn", max_value: int = 12
) -> ParameterSet:
    """Draw admissible weights with numerators and denominators uniform in [1, max_value]."""
    rng = random.Random(seed)
    while True:
        params = ParameterSet(tuple(
            Fraction(rng.randint(1, max_value), rng.randint(1, max_value))
            for _ in range(n)))
        if not check_admissible(params, N, mode):
            return params
