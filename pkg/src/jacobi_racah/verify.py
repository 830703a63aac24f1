"""Named verification suites.

Every suite returns a :class:`~jacobi_racah.report.Report` whose checks are
exact equalities of canonical forms. A failed check carries a witness with
the first offending index and both values.
"""

from __future__ import annotations

import time
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import families
from .coupling import (CouplingScheme, block_text, commutative_family, eigenvalue, eigenvector,
                       k_vectors, nested_or_disjoint)
from .errors import InadmissibleParameters
from .exactnum import HigherRank, ParameterSet, check_admissible, format_rational, require_admissible
from .opcalc import (DiffOp, casimir, check_algebra_relations, euler_operator, hahn_difference_ops,
                     hahn_jacobi_pair, hahn_relations, hahn_sl2_realisation, jacobi_operator,
                     racah_difference_ops, racah_relations, racah_sl2_realisation)
from .polyalg import Poly, expand_in_basis, monomials_of_degree, monomials_up_to, variables
from .report import Report

HAHN_SCHEME = CouplingScheme.parse("1|2 -> 12")
RACAH_V_SCHEME = CouplingScheme.parse("1|2|3 -> 12|3 -> 123")
RACAH_W_SCHEME = CouplingScheme.parse("1|2|3 -> 1|23 -> 123")

fmt = format_rational


def _start(suite: str, params: ParameterSet, scope: dict, seed: int | None):
    return Report(suite, params.to_strings(), scope, seed), time.perf_counter()


def _compare_rows(report: Report, label: str, got: Sequence[Sequence[Fraction]],
                  expected: Sequence[Sequence[Fraction]]) -> None:
    """One check per row; the witness names the first differing entry."""
    for l, (g, e) in enumerate(zip(got, expected)):
        bad = next((k for k, (a, b) in enumerate(zip(g, e)) if a != b), None)
        witness = None if bad is None else f"l={l}, k={bad}: computed {fmt(g[bad])}, formula {fmt(e[bad])}"
        report.add(f"{label} l={l}", bad is None, witness)


def _eigen_check(report: Report, label: str, op: DiffOp, vec: Poly, value: Fraction) -> None:
    got = op(vec)
    expected = vec.scale(value)
    report.add(label, got == expected,
               None if got == expected else f"eigenvalue {fmt(value)}: residual {got - expected}")


def _matmul(a, b):
    return [[sum((a[i][j] * b[j][k] for j in range(len(b))), Fraction(0)) for k in range(len(b[0]))]
            for i in range(len(a))]


def _is_identity(m) -> bool:
    return all(m[i][j] == (1 if i == j else 0) for i in range(len(m)) for j in range(len(m)))


# -- two-variable convolution --------------------------------------------------

def hahn_bases(params: ParameterSet, N: int) -> tuple[list[Poly], list[Poly]]:
    """``v_l = x1^l x2^(N-l)`` and ``w_l = (x1 + x2)^N P_l((x2 - x1)/(x1 + x2))``."""
    vs = variables(2)
    x, y = Poly.var(vs, "x1"), Poly.var(vs, "x2")
    v = [x ** l * y ** (N - l) for l in range(N + 1)]
    w = [(x + y) ** (N - l) * families.homogenized_jacobi(l, params[1], params[2], x, y)
         for l in range(N + 1)]
    return v, w


def verify_hahn_convolution(params: ParameterSet, N: int, seed: int | None = None) -> Report:
    require_admissible(params, N, "hahn")
    report, start = _start("hahn-convolution", params, {"N": N}, seed)
    X, Y, h12 = hahn_sl2_realisation(params)
    v, w = hahn_bases(params, N)
    l1, l2 = params.lambdas
    for l in range(N + 1):
        _eigen_check(report, f"X v_{l} = {l} v_{l}", X, v[l], Fraction(l))
        _eigen_check(report, f"Y w_{l} = l(l+λ1+λ2-1) w_{l}", Y, w[l], l * (l + l1 + l2 - 1))
        _eigen_check(report, f"h12 w_{l} = N w_{l}", h12, w[l], Fraction(N))
    forward = [expand_in_basis(w[l], v) for l in range(N + 1)]
    inverse = [expand_in_basis(v[l], w) for l in range(N + 1)]
    _compare_rows(report, "w in v-basis", forward, families.hahn_convolution_matrix(params, N))
    _compare_rows(report, "v in w-basis", inverse, families.hahn_convolution_matrix(params, N, inverse=True))
    report.add("forward x inverse = identity", _is_identity(_matmul(forward, inverse)),
               "round trip is not the identity")
    return report.finish(start)


# -- three-variable convolution ------------------------------------------------

def racah_bases(params: ParameterSet, N: int) -> tuple[list[Poly], list[Poly]]:
    """Eigenbases of ``C'_12`` and ``C'_23`` inside the ``C'_123`` eigenspace at level N."""
    v = [eigenvector(RACAH_V_SCHEME, (l, N - l), params) for l in range(N + 1)]
    w = [eigenvector(RACAH_W_SCHEME, (l, N - l), params) for l in range(N + 1)]
    return v, w


def racah_bases_direct(params: ParameterSet, N: int) -> tuple[list[Poly], list[Poly]]:
    """The same bases written out factor by factor in ``x, y, z``, bypassing the scheme bookkeeping."""
    vs = variables(3)
    x, y, z = (Poly.var(vs, n) for n in vs)
    l1, l2, l3 = params.lambdas
    hj = families.homogenized_jacobi
    v = [hj(N - l, l1 + l2 + 2 * l, l3, x + y, z) * hj(l, l1, l2, x, y) for l in range(N + 1)]
    w = [hj(N - l, l1, l2 + l3 + 2 * l, x, y + z) * hj(l, l2, l3, y, z) for l in range(N + 1)]
    return v, w


def verify_racah_convolution(params: ParameterSet, N: int, seed: int | None = None) -> Report:
    require_admissible(params, N, "racah")
    report, start = _start("racah-convolution", params, {"N": N}, seed)
    X, Y, C = racah_sl2_realisation(params)
    v, w = racah_bases(params, N)
    dv, dw = racah_bases_direct(params, N)
    report.add("scheme eigenvectors match the direct product form", v == dv and w == dw,
               "coupling-scheme construction differs from the explicit product")
    l1, l2, l3 = params.lambdas
    total = N * (l1 + l2 + l3 + N - 1)
    for l in range(N + 1):
        _eigen_check(report, f"X v_{l}", X, v[l], l * (l + l1 + l2 - 1))
        _eigen_check(report, f"Y w_{l}", Y, w[l], l * (l + l2 + l3 - 1))
        _eigen_check(report, f"C'123 v_{l}", C, v[l], total)
        _eigen_check(report, f"C'123 w_{l}", C, w[l], total)
    forward = [expand_in_basis(w[l], v) for l in range(N + 1)]
    inverse = [expand_in_basis(v[l], w) for l in range(N + 1)]
    _compare_rows(report, "w in v-basis", forward, families.racah_convolution_matrix(params, N))
    _compare_rows(report, "v in w-basis", inverse, families.racah_convolution_matrix(params, N, inverse=True))
    report.add("forward x inverse = identity", _is_identity(_matmul(forward, inverse)),
               "round trip is not the identity")
    return report.finish(start)


# -- orthogonality and Gamma -----------------------------------------------------

def verify_orthogonality(family: str, params: ParameterSet, N: int, seed: int | None = None) -> Report:
    report, start = _start(f"orthogonality-{family}", params, {"N": N}, seed)
    table = families.transition_table(family, params, N)
    P, T, G = table.values, table.renormalised, table.gamma
    rng = range(N + 1)
    for kind in ("columns", "rows"):
        bad = None
        for a in rng:
            for b in rng:
                if kind == "columns":
                    s = sum((P[k][a] * T[k][b] for k in rng), Fraction(0))
                else:
                    s = sum((P[a][l] * T[b][l] for l in rng), Fraction(0))
                if s != (G if a == b else 0):
                    bad = (a, b, s)
                    break
            if bad:
                break
        witness = None if bad is None else f"({bad[0]},{bad[1]}): sum {fmt(bad[2])}, Gamma {fmt(G)}"
        report.add(f"orthogonality over {kind} = Gamma * identity", bad is None, witness)
    return report.finish(start)


def verify_gamma_sums(family: str, params: ParameterSet, N: int, seed: int | None = None) -> Report:
    report, start = _start(f"gamma-sums-{family}", params, {"N": N}, seed)
    rec = families.recurrence_data(family, params, N)
    closed = families.gamma_closed(family, params, N)
    s_bd = sum((rec.bd_ratio(k) for k in range(N + 1)), Fraction(0))
    s_ac = sum((rec.ac_ratio(k) for k in range(N + 1)), Fraction(0))
    report.add("sum of B/D products = closed Gamma", s_bd == closed, f"{fmt(s_bd)} vs {fmt(closed)}")
    report.add("sum of A/C products = closed Gamma", s_ac == closed, f"{fmt(s_ac)} vs {fmt(closed)}")
    for j in range(N + 1):
        a, b = rec.bd_ratio(j), families.bd_ratio_closed(family, params, N, j)
        report.add(f"B/D product closed form at {j}", a == b, f"{fmt(a)} vs {fmt(b)}")
        a, b = rec.ac_ratio(j), families.ac_ratio_closed(family, params, N, j)
        report.add(f"A/C product closed form at {j}", a == b, f"{fmt(a)} vs {fmt(b)}")
    lhs, rhs = families.gamma_sum_identity(family, params, N)
    report.add("summation identity", lhs == rhs, f"{fmt(lhs)} vs {fmt(rhs)}")
    return report.finish(start)


# -- tridiagonal actions -----------------------------------------------------------

TRIDIAGONAL_SIDES = ("HahnX", "HahnY", "RacahX", "RacahY")


def verify_tridiagonal(params: ParameterSet, N: int, side: str, seed: int | None = None) -> Report:
    """Expand the non-diagonal operator on an eigenbasis of the other one.

    ``*Y`` sides act with ``Y`` on the ``X``-eigenbasis ``v``: expected
    diagonal ``M(l)`` and off-diagonal products ``B(l) D(l+1)``. ``*X`` sides
    act with ``X`` on the ``Y``-eigenbasis ``w``: diagonal ``N_l`` and
    products ``A_l C_{l+1}``. Both quantities are unchanged by rescaling
    the basis vectors.
    """
    if side not in TRIDIAGONAL_SIDES:
        raise ValueError(f"side must be one of {TRIDIAGONAL_SIDES}")
    family = "hahn" if side.startswith("Hahn") else "racah"
    require_admissible(params, N, family)
    report, start = _start(f"tridiagonal-{side}", params, {"N": N}, seed)
    rec = families.recurrence_data(family, params, N)
    if family == "hahn":
        X, Y, _ = hahn_sl2_realisation(params)
        v, w = hahn_bases(params, N)
    else:
        X, Y, _ = racah_sl2_realisation(params)
        v, w = racah_bases(params, N)
    if side.endswith("Y"):
        op, basis = Y, v
        diag, prod = rec.M, (lambda l: rec.B(l) * rec.D(l + 1))
    else:
        op, basis = X, w
        diag, prod = rec.Nk, (lambda l: rec.A(l) * rec.C(l + 1))
    # column l holds the coefficients of op(basis[l])
    cols = [expand_in_basis(op(basis[l]), basis) for l in range(N + 1)]
    for l in range(N + 1):
        outside = [i for i, c in enumerate(cols[l]) if c and abs(i - l) > 1]
        report.add(f"support of column {l} within l-1..l+1", not outside,
                   f"non-zero entries at {outside}")
        report.add(f"diagonal entry {l}", cols[l][l] == diag(l), f"{fmt(cols[l][l])} vs {fmt(diag(l))}")
    for l in range(N):
        got = cols[l][l + 1] * cols[l + 1][l]
        report.add(f"off-diagonal product {l},{l + 1}", got == prod(l), f"{fmt(got)} vs {fmt(prod(l))}")
    return report.finish(start)


# -- algebra relations -----------------------------------------------------------

def verify_hahn_algebra(params: ParameterSet, N: int, D: int = 8, seed: int | None = None) -> Report:
    """Hahn relations for the difference pair, the Jacobi pair and the sl2 realisation."""
    require_admissible(params, N, "hahn")
    report, start = _start("hahn-algebra", params, {"N": N, "D": D}, seed)
    X, Y = hahn_difference_ops(params, N)
    report.extend(check_algebra_relations(X, Y, hahn_relations(params, N), D), "difference pair: ")
    X, Y = hahn_jacobi_pair(params, N)
    report.extend(check_algebra_relations(X, Y, hahn_relations(params, N), D), "Jacobi pair: ")
    X, Y, h12 = hahn_sl2_realisation(params)
    report.extend(check_algebra_relations(X, Y, hahn_relations(params, h12), D), "sl2 with N -> h12: ")
    component = [Poly.monomial(X.vars, m) for m in monomials_of_degree(2, N)]
    report.extend(check_algebra_relations(X, Y, hahn_relations(params, N), D, test_vectors=component),
                  f"sl2 on degree-{N} component: ")
    h = euler_operator(X.vars)
    report.add("h12 equals the Euler operator", h12 == h, f"{h12} vs {h}")
    return report.finish(start)


def verify_racah_algebra(params: ParameterSet, N: int, D: int = 8, seed: int | None = None) -> Report:
    """Racah relations for the difference pair and the shifted-Casimir pair."""
    require_admissible(params, N, "racah")
    report, start = _start("racah-algebra", params, {"N": N, "D": D}, seed)
    X, Y = racah_difference_ops(params, N)
    report.extend(check_algebra_relations(X, Y, racah_relations(params, N), D), "difference pair: ")
    X, Y, C = racah_sl2_realisation(params)
    report.extend(check_algebra_relations(X, Y, racah_relations(params, C), D), "Casimir pair, C' central: ")
    v, _ = racah_bases(params, N)
    report.extend(check_algebra_relations(X, Y, racah_relations(params, N), D, test_vectors=v),
                  f"Casimir pair on level-{N} eigenspace: ")
    return report.finish(start)


# -- Jacobi operator conjugation -------------------------------------------------

def verify_conjugation(alpha, beta, max_l: int = 4, max_m: int = 4, one_sided_degree: int = 8,
                       two_sided_degree: int = 6, seed: int | None = None) -> Report:
    """Moving powers of ``(1 - u)`` and ``(1 + u)`` through the Jacobi operator."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    report = Report("conjugation", [fmt(alpha), fmt(beta)],
                    {"L": max_l, "M": max_m, "D": one_sided_degree}, seed)
    start = time.perf_counter()
    vs = ("u",)
    u = Poly.var(vs, "u")
    one_m, one_p = 1 - u, 1 + u
    phi = jacobi_operator(alpha, beta, vs)
    for l in range(max_l + 1):
        shifted = jacobi_operator(alpha + 2 * l, beta, vs)
        bad = None
        for d in range(one_sided_degree + 1):
            f = u ** d
            lhs = phi(one_m ** l * f)
            rhs = one_m ** l * (shifted(f) + f.scale(l * beta))
            if l:
                rhs = rhs - (one_m ** (l - 1) * one_p * f).scale(l * (l + alpha - 1))
            if lhs != rhs:
                bad = f"f=u^{d}: {lhs - rhs}"
                break
        report.add(f"one-sided l={l}", bad is None, bad)
    for l in range(max_l + 1):
        for m in range(max_m + 1):
            shifted = jacobi_operator(alpha + 2 * l, beta + 2 * m, vs)
            const = l * beta + m * alpha + 2 * l * m
            bad = None
            for d in range(two_sided_degree + 1):
                f = u ** d
                lhs = phi(one_m ** l * one_p ** m * f)
                rhs = one_m ** l * one_p ** m * (shifted(f) + f.scale(const))
                if l:
                    rhs = rhs - (one_m ** (l - 1) * one_p ** (m + 1) * f).scale(l * (l + alpha - 1))
                if m:
                    rhs = rhs - (one_m ** (l + 1) * one_p ** (m - 1) * f).scale(m * (m + beta - 1))
                if lhs != rhs:
                    bad = f"f=u^{d}: {lhs - rhs}"
                    break
            report.add(f"two-sided l={l} m={m}", bad is None, bad)
    return report.finish(start)


# -- higher rank -------------------------------------------------------------------

def verify_scheme(scheme: CouplingScheme, params: ParameterSet, D: int = 4, K: int = 4,
                  seed: int | None = None) -> Report:
    """Commutativity of the scheme's Casimir family and its common eigenvectors."""
    violations = check_admissible(params, 0, HigherRank(max(D, K), scheme.unions))
    if violations:
        raise InadmissibleParameters(violations)
    # the general-n admissibility rule is this package's own extension; say so in the report
    scope = {"scheme": str(scheme), "D": D, "K": K, "admissibility": "higher-rank extension"}
    report, start = _start("scheme", params, scope, seed)
    fam = commutative_family(scheme)
    ops = [casimir(U, params) for U in fam]
    monos = [Poly.monomial(ops[0].vars, m) for m in monomials_up_to(scheme.n, D)]
    for (i, A), (j, B) in combinations(enumerate(fam), 2):
        name = f"[C'{block_text(A)}, C'{block_text(B)}] = 0"
        if not nested_or_disjoint(A, B):
            report.add(name, False, "subsets are neither nested nor disjoint")
            continue
        comm = ops[i].commutator(ops[j])
        witness = None
        if not comm.is_zero():
            witness = f"normal form {comm}"
        else:
            for m in monos:
                out = comm(m)
                if out:
                    witness = f"{m} -> {out}"
                    break
        report.add(name, witness is None, witness)
    for k in k_vectors(scheme.n - 1, K):
        vec = eigenvector(scheme, k, params)
        bad = None
        for b, op in enumerate(ops, start=1):
            value = eigenvalue(scheme, b, k, params)
            got = op(vec)
            if got != vec.scale(value):
                bad = f"C'{block_text(fam[b - 1])}: expected eigenvalue {fmt(value)}, residual {got - vec.scale(value)}"
                break
        report.add(f"eigenvector k={k}", bad is None, bad)
    return report.finish(start)


def scheme_transition_matrix(source: CouplingScheme, target: CouplingScheme,
                             params: ParameterSet, N: int) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
    """Brute-force expansion of ``target``'s level-N eigenvectors in ``source``'s.

    Returns the shared list of ``k`` vectors (those with ``|k| = N``) and the
    matrix whose row ``i`` expands ``target``'s ``i``-th vector.
    """
    ks = [k for k in k_vectors(source.n - 1, N) if sum(k) == N]
    basis = [eigenvector(source, k, params) for k in ks]
    rows = [expand_in_basis(eigenvector(target, k, params), basis) for k in ks]
    return ks, rows


def verify_cross_family(params: ParameterSet, N: int, seed: int | None = None) -> Report:
    """For three points, the brute-force transition between the two scheme bases equals the Racah formula."""
    require_admissible(params, N, "racah")
    report, start = _start("cross-family", params, {"N": N}, seed)
    ks, rows = scheme_transition_matrix(RACAH_V_SCHEME, RACAH_W_SCHEME, params, N)
    # k = (l, N - l) for l = 0..N, in the order of k_vectors
    order = sorted(range(len(ks)), key=lambda i: ks[i][0])
    matrix = [[rows[i][j] for j in order] for i in order]
    _compare_rows(report, "scheme transition", matrix, families.racah_convolution_matrix(params, N))
    return report.finish(start)


# -- printed n=4 examples ----------------------------------------------------------

def _homogenised_from_univariate(p: Poly, k: int, xI: Poly, xJ: Poly) -> Poly:
    """``(xI + xJ)^k p(u)`` with ``u = (xJ - xI)/(xI + xJ)``, expanded power by power."""
    out = Poly.zero(xI.vars)
    s, t = xI + xJ, xJ - xI
    for (j,), c in p.terms.items():
        out = out + (t ** j * s ** (k - j)).scale(c)
    return out


# Each example: scheme text and, per step, (I, J, extra on lam_I, extra on lam_J)
# where the extras are linear in k given as coefficient tuples.
N4_EXAMPLES = (
    ("1|2|3|4 -> 12|3|4 -> 123|4 -> 1234",
     (("1", "2", (0, 0, 0), (0, 0, 0)), ("12", "3", (2, 0, 0), (0, 0, 0)), ("123", "4", (2, 2, 0), (0, 0, 0)))),
    ("1|2|3|4 -> 12|3|4 -> 12|34 -> 1234",
     (("1", "2", (0, 0, 0), (0, 0, 0)), ("3", "4", (0, 0, 0), (0, 0, 0)), ("12", "34", (2, 0, 0), (0, 2, 0)))),
    ("1|2|3|4 -> 1|2|34 -> 1|234 -> 1234",
     (("3", "4", (0, 0, 0), (0, 0, 0)), ("2", "34", (0, 0, 0), (2, 0, 0)), ("1", "234", (0, 0, 0), (2, 2, 0)))),
    ("1|2|3|4 -> 1|24|3 -> 1|234 -> 1234",
     (("2", "4", (0, 0, 0), (0, 0, 0)), ("24", "3", (2, 0, 0), (0, 0, 0)), ("1", "234", (0, 0, 0), (2, 2, 0)))),
)


def printed_example_vector(index: int, k: Sequence[int], params: ParameterSet) -> Poly:
    """The n=4 example vector built factor by factor from univariate Jacobi polynomials."""
    _, factors = N4_EXAMPLES[index]
    vs = variables(4)
    xs = [Poly.var(vs, v) for v in vs]

    def x_block(text):
        out = Poly.zero(vs)
        for ch in text:
            out = out + xs[int(ch) - 1]
        return out

    out = Poly.const(vs, 1)
    for step, (I, J, eI, eJ) in enumerate(factors):
        lam_I = params.subset_sum(int(ch) for ch in I) + sum(c * kk for c, kk in zip(eI, k))
        lam_J = params.subset_sum(int(ch) for ch in J) + sum(c * kk for c, kk in zip(eJ, k))
        p = families.jacobi_poly(k[step], lam_I, lam_J, ("u",))
        out = out * _homogenised_from_univariate(p, k[step], x_block(I), x_block(J))
    return out


def verify_printed_examples(params: ParameterSet, K: int = 3, seed: int | None = None) -> Report:
    report, start = _start("printed-examples", params, {"K": K}, seed)
    for index, (text, _) in enumerate(N4_EXAMPLES):
        scheme = CouplingScheme.parse(text)
        bad = None
        for k in k_vectors(3, K):
            if printed_example_vector(index, k, params) != eigenvector(scheme, k, params):
                bad = f"k={k}"
                break
        report.add(f"{text} matches eigenvector", bad is None, bad)
    return report.finish(start)
