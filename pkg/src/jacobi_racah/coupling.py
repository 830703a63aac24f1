"""Coupling schemes on set partitions and their common eigenvectors.

A scheme is a sequence of ``n - 1`` merges taking ``{1} | ... | {n}`` to
``{1..n}``. Step ``b`` merges blocks ``(I_b, J_b)`` with ``min(I_b) < min(J_b)``.
Step indices in the public functions are 1-based, matching the usual
numbering of the merges.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import ArityOutOfRange, IndexOutOfRange, InadmissibleParameters
from .exactnum import HigherRank, ParameterSet, check_admissible
from .families import homogenized_jacobi
from .polyalg import Poly, variables

Block = frozenset
Partition = tuple  # of Blocks, ordered by minimum element

MAX_ENUMERATION_N = 7


def canonical_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted((frozenset(b) for b in blocks), key=min))


def is_partition(blocks: Sequence[frozenset], n: int) -> bool:
    seen: set[int] = set()
    for b in blocks:
        if not b or seen & b:
            return False
        seen |= b
    return seen == set(range(1, n + 1))


def block_text(block: Iterable[int]) -> str:
    return "".join(str(i) for i in sorted(block))


def partition_text(partition: Partition) -> str:
    return "|".join(block_text(b) for b in partition)


class Precedence(enum.Enum):
    LEFT_OF = "LeftOf"
    RIGHT_OF = "RightOf"
    EQUAL = "Equal"
    UNRELATED = "Unrelated"


@dataclass(frozen=True)
class CouplingScheme:
    n: int
    steps: tuple[tuple[frozenset, frozenset], ...]

    def __post_init__(self):
        steps = tuple((frozenset(I), frozenset(J)) for I, J in self.steps)
        steps = tuple((I, J) if min(I) < min(J) else (J, I) for I, J in steps)
        object.__setattr__(self, "steps", steps)
        if len(steps) != self.n - 1:
            raise ValueError(f"a scheme on {self.n} points has {self.n - 1} steps, got {len(steps)}")
        current = set(canonical_partition([i] for i in range(1, self.n + 1)))
        for I, J in steps:
            if I not in current or J not in current or I == J:
                raise ValueError(f"step ({block_text(I)}, {block_text(J)}) does not merge two current blocks")
            current -= {I, J}
            current.add(I | J)

    @cached_property
    def partitions(self) -> tuple[Partition, ...]:
        current = canonical_partition([i] for i in range(1, self.n + 1))
        out = [current]
        for I, J in self.steps:
            current = canonical_partition([b for b in current if b not in (I, J)] + [I | J])
            out.append(current)
        return tuple(out)

    @cached_property
    def unions(self) -> tuple[frozenset, ...]:
        return tuple(I | J for I, J in self.steps)

    def __str__(self) -> str:
        return " -> ".join(partition_text(p) for p in self.partitions)

    @classmethod
    def parse(cls, text: str) -> "CouplingScheme":
        """Read the ``"1|2|3 -> 12|3 -> 123"`` form."""
        parts = [p.strip() for p in text.split("->")]
        partitions = [canonical_partition([int(ch) for ch in blk] for blk in p.split("|")) for p in parts]
        n = sum(len(b) for b in partitions[0])
        if any(len(b) != 1 for b in partitions[0]):
            raise ValueError("a scheme starts from the partition into singletons")
        steps = []
        for before, after in zip(partitions, partitions[1:]):
            removed = [b for b in before if b not in after]
            added = [b for b in after if b not in before]
            if len(removed) != 2 or len(added) != 1 or removed[0] | removed[1] != added[0]:
                raise ValueError(f"{partition_text(before)} -> {partition_text(after)} is not a coupling step")
            steps.append((removed[0], removed[1]))
        scheme = cls(n, tuple(steps))
        if scheme.partitions != tuple(partitions):
            raise ValueError(f"partitions in {text!r} are not consistent")
        return scheme

    def _check_step(self, b: int) -> None:
        if not 1 <= b <= self.n - 1:
            raise IndexOutOfRange(f"step index {b} outside 1..{self.n - 1}")

    def left_steps(self, b: int) -> list[int]:
        """Steps ``a`` whose union lies inside ``I_b``."""
        self._check_step(b)
        I = self.steps[b - 1][0]
        return [a for a in range(1, b) if self.unions[a - 1] <= I]

    def right_steps(self, b: int) -> list[int]:
        self._check_step(b)
        J = self.steps[b - 1][1]
        return [a for a in range(1, b) if self.unions[a - 1] <= J]


def precedence(scheme: CouplingScheme, a: int, b: int) -> Precedence:
    scheme._check_step(a)
    scheme._check_step(b)
    if a > b:
        raise IndexOutOfRange(f"precedence needs a <= b, got a={a}, b={b}")
    if a == b:
        return Precedence.EQUAL
    I, J = scheme.steps[b - 1]
    u = scheme.unions[a - 1]
    if u <= I:
        return Precedence.LEFT_OF
    if u <= J:
        return Precedence.RIGHT_OF
    return Precedence.UNRELATED


def enumerate_schemes(n: int) -> list[CouplingScheme]:
    """Every coupling scheme, ordered lexicographically by the merged block positions."""
    if not 2 <= n <= MAX_ENUMERATION_N:
        raise ArityOutOfRange(f"n must lie in 2..{MAX_ENUMERATION_N}, got {n}")
    out = []

    def walk(partition, steps):
        if len(partition) == 1:
            out.append(CouplingScheme(n, tuple(steps)))
            return
        for i in range(len(partition)):
            for j in range(i + 1, len(partition)):
                I, J = partition[i], partition[j]
                rest = [b for k, b in enumerate(partition) if k not in (i, j)]
                walk(canonical_partition(rest + [I | J]), steps + [(I, J)])

    walk(canonical_partition([i] for i in range(1, n + 1)), [])
    return out


def scheme_count(n: int) -> int:
    return math.factorial(n) * math.factorial(n - 1) // 2 ** (n - 1)


def family_count(n: int) -> int:
    return math.prod(range(1, 2 * n - 2, 2))


def commutative_family(scheme: CouplingScheme) -> list[frozenset]:
    """Index sets of the commuting shifted Casimirs, in step order."""
    return list(scheme.unions)


def family_key(family: Iterable[frozenset]) -> frozenset:
    return frozenset(frozenset(s) for s in family)


def dedupe_families(schemes: Iterable[CouplingScheme]) -> list[frozenset]:
    """Distinct families (as sets of subsets), in order of first appearance."""
    seen: dict[frozenset, None] = {}
    for s in schemes:
        seen.setdefault(family_key(s.unions), None)
    return list(seen)


def family_text(family: Iterable[frozenset]) -> str:
    ordered = sorted(family, key=lambda s: (len(s), sorted(s)))
    return "{" + ", ".join("C'" + block_text(s) for s in ordered) + "}"


def nested_or_disjoint(A: frozenset, B: frozenset) -> bool:
    return A <= B or B <= A or not (A & B)


# -- family graph (experimental) --------------------------------------------

def family_graph(n: int) -> dict[frozenset, list[frozenset]]:
    """Families adjacent when they differ in exactly one subset. Experimental."""
    fams = dedupe_families(enumerate_schemes(n))
    graph: dict[frozenset, list[frozenset]] = {f: [] for f in fams}
    for i, f in enumerate(fams):
        for g in fams[i + 1:]:
            if len(f - g) == 1:
                graph[f].append(g)
                graph[g].append(f)
    return graph


def family_distances(graph: dict, source: frozenset) -> dict[frozenset, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        f = queue.popleft()
        for g in graph[f]:
            if g not in dist:
                dist[g] = dist[f] + 1
                queue.append(g)
    return dist


def family_graph_diameter(n: int) -> int:
    graph = family_graph(n)
    return max(max(family_distances(graph, f).values()) for f in graph)


# -- eigenvectors and eigenvalues ---------------------------------------------

def _check_k(scheme: CouplingScheme, k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(v) for v in k)
    if len(k) != scheme.n - 1 or any(v < 0 for v in k):
        raise ValueError(f"k must hold {scheme.n - 1} non-negative integers, got {k}")
    return k


def shifted_params(scheme: CouplingScheme, k: Sequence[int], params: ParameterSet) -> list[tuple[Fraction, Fraction]]:
    """Per step ``b``: ``(lam_{I_b} + 2 sum_{a <L b} k_a, lam_{J_b} + 2 sum_{a <R b} k_a)``."""
    k = _check_k(scheme, k)
    out = []
    for b, (I, J) in enumerate(scheme.steps, start=1):
        left = sum(k[a - 1] for a in scheme.left_steps(b))
        right = sum(k[a - 1] for a in scheme.right_steps(b))
        out.append((params.subset_sum(I) + 2 * left, params.subset_sum(J) + 2 * right))
    return out


def eigenvector(scheme: CouplingScheme, k: Sequence[int], params: ParameterSet) -> Poly:
    """Product over steps of homogenised Jacobi factors in ``x_{I_b}`` and ``x_{J_b}``."""
    k = _check_k(scheme, k)
    if params.n != scheme.n:
        raise ValueError(f"scheme on {scheme.n} points but {params.n} weights")
    violations = check_admissible(params, 0, HigherRank(sum(k), scheme.unions))
    if violations:
        raise InadmissibleParameters(violations)
    vs = variables(scheme.n)
    xs = [Poly.var(vs, v) for v in vs]

    def block_sum(block):
        out = Poly.zero(vs)
        for i in block:
            out = out + xs[i - 1]
        return out

    out = Poly.const(vs, 1)
    for (I, J), kb, (lam_I, lam_J) in zip(scheme.steps, k, shifted_params(scheme, k, params)):
        if kb:
            out = out * homogenized_jacobi(kb, lam_I, lam_J, block_sum(I), block_sum(J))
    return out


def subtree_total(scheme: CouplingScheme, b: int, k: Sequence[int]) -> int:
    """``sum_{a <= b} k_a`` over the steps that built ``I_b | J_b``, including ``b``."""
    k = _check_k(scheme, k)
    return k[b - 1] + sum(k[a - 1] for a in scheme.left_steps(b) + scheme.right_steps(b))


def eigenvalue(scheme: CouplingScheme, b: int, k: Sequence[int], params: ParameterSet) -> Fraction:
    scheme._check_step(b)
    t = subtree_total(scheme, b, k)
    I, J = scheme.steps[b - 1]
    return Fraction(t) * (t + params.subset_sum(I) + params.subset_sum(J) - 1)


def k_vectors(length: int, max_total: int) -> list[tuple[int, ...]]:
    """All non-negative integer vectors of the given length with sum ``<= max_total``."""
    return [k for k in product(range(max_total + 1), repeat=length) if sum(k) <= max_total]
