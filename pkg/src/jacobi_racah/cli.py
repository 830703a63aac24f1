"""Command-line front end: ``jacobi-racah <command> ...``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
errors, 3 when the parameters are inadmissible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from . import families, verify
from .coupling import (CouplingScheme, dedupe_families, enumerate_schemes, family_count, family_text,
                       scheme_count)
from .errors import InadmissibleParameters, JacobiRacahError
from .exactnum import HigherRank, ParameterSet, check_admissible, format_rational, sample_parameters
from .polyalg import expand_in_basis
from .report import Report, reports_to_csv

JOBS_ENV = "JACOBI_RACAH_JOBS"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INADMISSIBLE = 0, 1, 2, 3

VERIFY_SUITES = ("hahn-algebra", "racah-algebra", "hahn-convolution", "racah-convolution",
                 "orthogonality", "gamma-sums", "tridiagonal")


class UsageError(Exception):
    pass


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None,
                   help=f"worker processes (default: ${JOBS_ENV} or 1)")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--timing", action="store_true",
                   help="record real elapsed_ms (otherwise 0, keeping output reproducible)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="jacobi-racah", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    vsub = v.add_subparsers(dest="suite", required=True)
    for name in VERIFY_SUITES:
        s = vsub.add_parser(name, parents=[common])
        s.add_argument("--params", help="comma-separated rationals; sampled from --seed when omitted")
        s.add_argument("--N", type=int, default=4)
        s.add_argument("--seeds", type=int, default=1,
                       help="number of consecutive seeds to sample parameters from")
        if name.endswith("algebra"):
            s.add_argument("--D", type=int, default=8)
        if name in ("orthogonality", "gamma-sums"):
            s.add_argument("--family", choices=("hahn", "racah"), default="hahn")
        if name == "tridiagonal":
            s.add_argument("--side", choices=verify.TRIDIAGONAL_SIDES, action="append",
                           help="repeatable; default is every side")

    sc = sub.add_parser("schemes", help="coupling schemes")
    ssub = sc.add_subparsers(dest="action", required=True)
    e = ssub.add_parser("enumerate", parents=[common])
    e.add_argument("--n", type=int, default=4)
    e.add_argument("--dedupe", action="store_true", help="also list the distinct commutative families")
    ec = ssub.add_parser("eigencheck", parents=[common])
    ec.add_argument("--n", type=int, default=4)
    ec.add_argument("--scheme", help='e.g. "1|2|3 -> 12|3 -> 123"; default is every scheme')
    ec.add_argument("--sample", type=int, help="check this many schemes drawn with --seed")
    ec.add_argument("--params")
    ec.add_argument("--D", type=int, default=4)
    ec.add_argument("--K", type=int, default=4)

    x = sub.add_parser("expand", parents=[common], help="print a convolution expansion")
    x.add_argument("--family", choices=("hahn", "racah"), default="hahn")
    x.add_argument("--params")
    x.add_argument("--N", type=int, default=4)
    x.add_argument("--inverse", action="store_true", help="expand v_l in the w basis instead")

    t = sub.add_parser("table", parents=[common], help="print a transition table")
    t.add_argument("--family", choices=("hahn", "racah"), default="hahn")
    t.add_argument("--params")
    t.add_argument("--N", type=int, default=4)
    return parser


# -- parameter handling ---------------------------------------------------------

def _parse_params(text: str, n: int | None) -> ParameterSet:
    try:
        params = ParameterSet.parse(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"cannot parse --params {text!r}: {exc}") from None
    if n is not None and params.n != n:
        raise UsageError(f"expected {n} parameters, got {params.n}")
    return params


def _resolve(args, n: int, N: int, mode, seed: int) -> tuple[ParameterSet, bool]:
    """Explicit parameters, or a sample drawn from ``seed``. Second value: sampled."""
    if args.params:
        params = _parse_params(args.params, n)
        violations = check_admissible(params, N, mode)
        if violations:
            raise InadmissibleParameters(violations)
        return params, False
    return sample_parameters(n, N, seed, mode), True


# -- workers (module level so they pickle) -------------------------------------

def _run_suite(task):
    suite, params_text, N, extra, seed = task
    params = ParameterSet.parse(params_text)
    if suite == "hahn-algebra":
        return [verify.verify_hahn_algebra(params, N, extra["D"], seed)]
    if suite == "racah-algebra":
        return [verify.verify_racah_algebra(params, N, extra["D"], seed)]
    if suite == "hahn-convolution":
        return [verify.verify_hahn_convolution(params, N, seed)]
    if suite == "racah-convolution":
        return [verify.verify_racah_convolution(params, N, seed)]
    if suite == "orthogonality":
        return [verify.verify_orthogonality(extra["family"], params, N, seed)]
    if suite == "gamma-sums":
        return [verify.verify_gamma_sums(extra["family"], params, N, seed)]
    return [verify.verify_tridiagonal(params, N, side, seed) for side in extra["sides"]]


def _run_scheme(task):
    scheme_text, params_text, D, K, seed = task
    return verify.verify_scheme(CouplingScheme.parse(scheme_text), ParameterSet.parse(params_text), D, K, seed)


def _map(fn: Callable, tasks: list, jobs: int) -> list:
    """Order-preserving map, in worker processes when ``jobs > 1``."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


# -- commands -----------------------------------------------------------------------

def _suite_arity(suite: str, args) -> tuple[int, str]:
    if suite.startswith("hahn"):
        return 2, "hahn"
    if suite.startswith("racah"):
        return 3, "racah"
    if suite == "tridiagonal":
        sides = args.side or list(verify.TRIDIAGONAL_SIDES)
        fams = {"hahn" if s.startswith("Hahn") else "racah" for s in sides}
        if len(fams) > 1:
            if args.params:
                raise UsageError("explicit --params fit one family; pick --side values from a single family")
            return 0, "mixed"
        fam = fams.pop()
        return (2 if fam == "hahn" else 3), fam
    return (2 if args.family == "hahn" else 3), args.family


def cmd_verify(args, jobs: int, notes: list[str]) -> list[Report]:
    n, family = _suite_arity(args.suite, args)
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    if args.N < 0:
        raise UsageError("--N must be non-negative")
    seeds = [args.seed] if args.params else list(range(args.seed, args.seed + args.seeds))
    tasks = []
    for seed in seeds:
        extra = {"D": getattr(args, "D", 8), "family": getattr(args, "family", None)}
        if family == "mixed":
            # one parameter draw per family
            for fam, arity in (("hahn", 2), ("racah", 3)):
                params = sample_parameters(arity, args.N, seed, fam)
                notes.append(f"seed {seed}: sampled {fam} params {params}")
                sides = [s for s in (args.side or verify.TRIDIAGONAL_SIDES) if s.lower().startswith(fam)]
                tasks.append((args.suite, str(params), args.N, dict(extra, sides=sides), seed))
            continue
        params, sampled = _resolve(args, n, args.N, family, seed)
        if sampled:
            notes.append(f"seed {seed}: sampled params {params}")
        extra["sides"] = getattr(args, "side", None) or [s for s in verify.TRIDIAGONAL_SIDES if s.lower().startswith(family)]
        tasks.append((args.suite, str(params), args.N, extra, seed))
    return [r for batch in _map(_run_suite, tasks, jobs) for r in batch]


def cmd_eigencheck(args, jobs: int, notes: list[str]) -> list[Report]:
    try:
        if args.scheme:
            schemes = [CouplingScheme.parse(args.scheme)]
        else:
            schemes = enumerate_schemes(args.n)
            if args.sample is not None:
                if args.sample < 1:
                    raise UsageError("--sample must be at least 1")
                picks = sorted(random.Random(args.seed).sample(range(len(schemes)), min(args.sample, len(schemes))))
                schemes = [schemes[i] for i in picks]
    except (ValueError, JacobiRacahError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from None
    n = schemes[0].n
    depth = max(args.D, args.K)
    mode = HigherRank(depth)
    params, sampled = _resolve(args, n, depth, mode, args.seed)
    if sampled:
        notes.append(f"seed {args.seed}: sampled params {params}")
    tasks = [(str(s), str(params), args.D, args.K, args.seed) for s in schemes]
    return _map(_run_scheme, tasks, jobs)


def _render_enumerate(args) -> tuple[str, int]:
    try:
        schemes = enumerate_schemes(args.n)
    except JacobiRacahError as exc:
        raise UsageError(str(exc)) from None
    fams = dedupe_families(schemes) if args.dedupe else None
    ok = len(schemes) == scheme_count(args.n) and (fams is None or len(fams) == family_count(args.n))
    if args.format == "json":
        doc = {"n": args.n, "scheme_count": len(schemes), "schemes": [str(s) for s in schemes]}
        if fams is not None:
            doc["family_count"] = len(fams)
            doc["families"] = [family_text(f) for f in fams]
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", ok
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "index", "value"])
        w.writerows(["scheme", i, str(s)] for i, s in enumerate(schemes, 1))
        if fams is not None:
            w.writerows(["family", i, family_text(f)] for i, f in enumerate(fams, 1))
        return buf.getvalue(), ok
    lines = [f"{i:>5}  {s}" for i, s in enumerate(schemes, 1)]
    lines.append(f"{len(schemes)} schemes")
    if fams is not None:
        lines += [f"{i:>5}  {family_text(f)}" for i, f in enumerate(fams, 1)]
        lines.append(f"{len(fams)} families")
    return "\n".join(lines) + "\n", ok


def _render_expand(args, notes) -> tuple[str, bool]:
    n = 2 if args.family == "hahn" else 3
    params, sampled = _resolve(args, n, args.N, args.family, args.seed)
    if sampled:
        notes.append(f"seed {args.seed}: sampled params {params}")
    bases = verify.hahn_bases if args.family == "hahn" else verify.racah_bases
    matrix = families.hahn_convolution_matrix if args.family == "hahn" else families.racah_convolution_matrix
    v, w = bases(params, args.N)
    src, dst, name, other = (v, w, "v", "w") if args.inverse else (w, v, "w", "v")
    rows = [expand_in_basis(src[l], dst) for l in range(args.N + 1)]
    formula = matrix(params, args.N, inverse=args.inverse)
    agree = [list(r) == list(f) for r, f in zip(rows, formula)]
    if args.format == "json":
        doc = {"family": args.family, "params": params.to_strings(), "N": args.N, "seed": args.seed,
               "expanded": name, "basis": other,
               "rows": [[format_rational(c) for c in r] for r in rows], "matches_formula": agree}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", all(agree)
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["l", "k", "coefficient", "matches_formula"])
        for l, r in enumerate(rows):
            wr.writerows([l, k, format_rational(c), agree[l]] for k, c in enumerate(r))
        return buf.getvalue(), all(agree)
    lines = [f"family: {args.family}", f"params: {params}", f"N: {args.N}", f"seed: {args.seed}"]
    for l, r in enumerate(rows):
        terms = " + ".join(f"({format_rational(c)}) {other}_{k}" for k, c in enumerate(r) if c) or "0"
        lines.append(f"{name}_{l} = {terms}" + ("" if agree[l] else "   [differs from formula]"))
    return "\n".join(lines) + "\n", all(agree)


def _render_table(args, notes) -> str:
    n = 2 if args.family == "hahn" else 3
    params, sampled = _resolve(args, n, args.N, args.family, args.seed)
    if sampled:
        notes.append(f"seed {args.seed}: sampled params {params}")
    table = families.transition_table(args.family, params, args.N)
    if args.format == "json":
        doc = table.to_dict()
        doc["seed"] = args.seed
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["k", "l", "value", "renormalised"])
        for k in range(args.N + 1):
            wr.writerows([k, l, format_rational(table.values[k][l]), format_rational(table.renormalised[k][l])]
                         for l in range(args.N + 1))
        return buf.getvalue()
    lines = [f"family: {args.family}", f"params: {params}", f"N: {args.N}", f"seed: {args.seed}",
             f"Gamma: {format_rational(table.gamma)}", "values [k][l]:"]
    lines += ["  " + "  ".join(format_rational(v) for v in row) for row in table.values]
    lines.append("renormalised [k][l]:")
    lines += ["  " + "  ".join(format_rational(v) for v in row) for row in table.renormalised]
    return "\n".join(lines) + "\n"


def render_reports(reports: Sequence[Report], fmt: str) -> str:
    if fmt == "json":
        docs = [r.to_dict() for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return reports_to_csv(list(reports))
    return "\n\n".join(r.to_text() for r in reports) + "\n"


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Let ``--params -1,2`` through; argparse would read ``-1,2`` as an option."""
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--params", "--scheme"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    notes: list[str] = []
    try:
        if jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if args.command == "verify":
            reports = cmd_verify(args, jobs, notes)
        elif args.command == "schemes" and args.action == "eigencheck":
            reports = cmd_eigencheck(args, jobs, notes)
        else:
            reports = None
        if reports is not None:
            if not args.timing:
                for r in reports:
                    r.elapsed_ms = 0
            text, ok = render_reports(reports, args.format), all(r.passed for r in reports)
        elif args.command == "schemes":
            text, ok = _render_enumerate(args)
        elif args.command == "expand":
            text, ok = _render_expand(args, notes)
        else:
            text, ok = _render_table(args, notes), True
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except InadmissibleParameters as exc:
        print("inadmissible parameters:", file=stderr)
        for v in exc.violations:
            print(f"  {v}", file=stderr)
        return EXIT_INADMISSIBLE
    for note in notes:
        print(note, file=stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
