"""Command-line interface.

Exit codes: 0 success or PASS, 1 REJECT or a verification failure,
2 usage error (including malformed factorization/shape text),
3 INCONCLUSIVE or factoring budget exhausted.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__, records
from .arith import jacobi, legendre, reciprocity_pair
from .criteria import (
    CRITERIA,
    Outcome,
    apply_criterion,
    parity_certificate,
    parse_shape,
    residue_matrix,
)
from .errors import DomainError, GrammarError, IncompleteFactorization, UsageError
from .euler_form import VERIFIABLE, check_euler_form, verify_lemma_numeric
from .factor import (
    DEFAULT_BUDGET,
    classify,
    divisor_count,
    factorize,
    parse_factorization,
    sigma,
)
from .search import SCAN_CEILING, SURVIVOR_CAP, enumerate_shapes, run_pipeline, scan_perfect

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
ENUMERATION_LIMIT = 10**6
SURVIVORS_SHOWN = 20


class _Out:
    def __init__(self, fmt, stream=None):
        self.records = fmt == "records"
        self.stream = stream or sys.stdout

    def record(self, rec):
        if self.records:
            print(records.dumps(rec), file=self.stream)

    def text(self, line=""):
        if not self.records:
            print(line, file=self.stream)


def _criteria_list(text):
    names = [c.strip() for c in text.split(",") if c.strip()]
    for c in names:
        if c not in CRITERIA:
            raise argparse.ArgumentTypeError(
                f"unknown criterion {c!r}; choose from {', '.join(CRITERIA)}"
            )
    return names


def _pool(text):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"pool must be comma-separated integers: {text!r}")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _sym(v):
    return f"{v:+d}" if v else "0"


# Commands ---------------------------------------------------------------


def cmd_classify(args, out):
    c = classify(args.n, args.budget, args.seed)
    out.record(records.classification_record(c))
    out.text(f"{c.n}: {c.kind} (sigma = {c.sigma}, aliquot sum = {c.aliquot_sum})")
    return EXIT_OK


def cmd_sigma(args, out):
    f = factorize(args.n, args.budget, args.seed)
    s = sigma(f)
    out.record({"type": "sigma", "n": args.n, "factorization": str(f), "sigma": s})
    out.text(f"sigma({args.n}) = {s}")
    return EXIT_OK


def cmd_factor(args, out):
    try:
        f = factorize(args.n, args.budget, args.seed)
    except IncompleteFactorization as exc:
        found = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(exc.found.items()))
        out.record({"type": "factorization", "n": args.n, "factorization": found or "1",
                    "complete": False, "cofactor": exc.cofactor})
        out.text(f"{args.n} = {found + '*' if found else ''}[{exc.cofactor}] (incomplete)")
        return EXIT_INCONCLUSIVE
    out.record({"type": "factorization", "n": args.n, "factorization": str(f), "complete": True})
    out.text(f"{args.n} = {f}")
    return EXIT_OK


def _enumerated_divisor_count(n):
    r = math.isqrt(n)
    count = sum(2 for d in range(1, r + 1) if n % d == 0)
    return count - (r * r == n)


def cmd_divisors(args, out):
    f = factorize(args.n, args.budget, args.seed)
    formula = divisor_count(f)
    rec = {"type": "divisors", "n": args.n, "factorization": str(f), "formula_count": formula}
    line = f"{args.n} = {f}: {formula} divisors by the exponent formula"
    code = EXIT_OK
    if args.n <= ENUMERATION_LIMIT:
        enumerated = _enumerated_divisor_count(args.n)
        rec.update(enumerated_count=enumerated, agree=enumerated == formula)
        line += f", {enumerated} by enumeration ({'agree' if enumerated == formula else 'MISMATCH'})"
        if enumerated != formula:
            code = EXIT_REJECT
    out.record(rec)
    out.text(line)
    return code


def cmd_legendre(args, out):
    v = legendre(args.a, args.p)
    out.record({"type": "symbol", "symbol": "legendre", "a": args.a, "modulus": args.p, "value": v})
    out.text(f"({args.a}/{args.p}) = {_sym(v)}")
    return EXIT_OK


def cmd_jacobi(args, out):
    v = jacobi(args.a, args.n)
    out.record({"type": "symbol", "symbol": "jacobi", "a": args.a, "modulus": args.n, "value": v})
    out.text(f"({args.a}/{args.n}) = {_sym(v)}")
    return EXIT_OK


def cmd_recip(args, out):
    p1, p2 = args.p1, args.p2
    a, b = reciprocity_pair(p1, p2)
    both = p1 % 4 == 3 and p2 % 4 == 3
    out.record({"type": "reciprocity", "p1": p1, "p2": p2, "p2_over_p1": a, "p1_over_p2": b,
                "both_3_mod_4": both})
    out.text(f"({p2}/{p1}) = {_sym(a)}, ({p1}/{p2}) = {_sym(b)}; "
             f"{'opposite (both 3 mod 4)' if both else 'equal'}")
    return EXIT_OK


def cmd_euler_form(args, out):
    report = check_euler_form(parse_factorization(args.factorization))
    out.record(records.euler_form_record(report))
    out.text(f"{report.factorization}: {'not excluded' if report.overall else 'EXCLUDED'}")
    for c in report.checks:
        out.text(f"  {c.lemma}  {c.status.value:<9}  {c.witness}")
    return EXIT_OK if report.overall else EXIT_REJECT


def _describe_witness(v):
    w = v.witness or {}
    if "symbols" in w and "modulus" in w:
        syms = " ".join(f"({p}/{w['modulus']})={_sym(s)}" for p, s in w["symbols"].items())
        return syms or "no even-part primes"
    if "matrix" in w:
        return "no off-diagonal +1 entry in the residue matrix"
    if "violated" in w:
        return "; ".join(f"{k}: {m}" for k, m in w["violated"].items())
    if "foreign_primes" in w:
        return (f"sigma({w['prime_power']}) = {w['sigma']} has foreign prime(s) "
                f"{', '.join(map(str, w['foreign_primes']))}")
    if "two_adic_valuation" in w:
        return (f"sigma({w['prime_power']}) = {w['sigma']} has 2-adic valuation "
                f"{w['two_adic_valuation']}, expected {w['expected_valuation']}")
    if "cofactor" in w:
        return f"unfactored cofactor {w['cofactor']} of sigma({w['prime_power']})"
    return ""


def _matrix_lines(matrix):
    primes, entries = matrix["primes"], matrix["entries"]
    w = max(len(str(p)) for p in primes) + 1
    yield " " * w + "".join(f"{p:>{w + 1}}" for p in primes)
    for i, (p, row) in enumerate(zip(primes, entries)):
        yield f"{p:>{w}}" + "".join(f"{'.' if i == j else _sym(v):>{w + 1}}"
                                    for j, v in enumerate(row))


def cmd_filter(args, out):
    shape = parse_shape(args.shape)
    verdicts = [apply_criterion(c, shape, args.budget, args.seed) for c in args.criteria]
    out.text(f"shape {shape}")
    for v in verdicts:
        out.record(records.verdict_record(shape, v))
        detail = _describe_witness(v) if v.outcome is not Outcome.PASS else ""
        if v.reason:
            detail = v.reason + (f" ({detail})" if detail else "")
        out.text(f"  {v.criterion:<19} {v.outcome.value.upper():<13} {detail}".rstrip())
        if v.rejected and v.witness and "matrix" in v.witness:
            for line in _matrix_lines(v.witness["matrix"]):
                out.text("    " + line)

    if args.certificate:
        if not shape.exact:
            raise UsageError("--certificate needs exact exponents in the shape")
        cert = parity_certificate(shape, args.budget, args.seed)
        out.record(records.certificate_record(cert))
        out.text("  parity certificate:")
        for e in cert.entries:
            if not e.complete:
                out.text(f"    sigma({e.prime}^{e.exponent}): unfactored cofactor {e.cofactor}")
                continue
            out.text(f"    sigma({e.prime}^{e.exponent}) = {e.sigma}: v2 = {e.two_adic_valuation}, "
                     f"{e.nonresidue_count} non-residue(s) mod {e.prime}, parity {e.parity} "
                     f"(expected {e.expected_parity})")

    if args.plot:
        from .plotting import plot_residue_matrix

        path = plot_residue_matrix(residue_matrix(shape.primes), Path(args.plot) / "residue_matrix.png")
        out.text(f"  figure: {path}")

    if any(v.rejected for v in verdicts):
        return EXIT_REJECT
    if any(v.undecided for v in verdicts) or not any(
        v.outcome is Outcome.PASS for v in verdicts
    ):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_scan(args, out):
    report = scan_perfect(args.start, args.end, args.odd_only, jobs=args.jobs,
                          block_size=args.block_size, histogram=bool(args.plot))
    for rec in records.scan_records(report):
        out.record(rec)
    what = "odd n" if args.odd_only else "n"
    out.text(f"scanned {report.scanned} {what} in [{report.start}, {report.end}] "
             f"in {report.elapsed:.2f} s ({report.throughput:,.0f}/s)")
    out.text(f"perfect numbers: {', '.join(map(str, report.perfect_found)) or 'none'}")
    out.text(f"odd perfect numbers: {', '.join(map(str, report.odd_perfect_found)) or 'none'}")
    if args.plot:
        from .plotting import plot_abundancy

        path = plot_abundancy(report, Path(args.plot) / "abundancy.png")
        out.text(f"figure: {path}")
    return EXIT_OK


def cmd_shapes(args, out):
    shapes = enumerate_shapes(args.pool, args.max_k, parity_only=args.exact_exponents is None,
                              max_exponent=args.exact_exponents or 0)
    for s in shapes:
        out.record(records.shape_record(s))
        out.text(str(s))
    return EXIT_OK


def _read_shapes(stream):
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("{"):
            rec = records.parse_record(line)
            if rec["type"] != "shape":
                continue
            line = rec["shape"]
        yield parse_shape(line)


def cmd_filter_pipeline(args, out):
    stream = open(args.input) if args.input else sys.stdin
    try:
        stats = run_pipeline(
            _read_shapes(stream),
            args.criteria,
            args.budget,
            args.seed,
            survivor_cap=args.survivor_cap,
            jobs=args.jobs,
            on_result=lambda r: out.record(records.shape_result_record(r)),
        )
    finally:
        if args.input:
            stream.close()
    out.record(records.pipeline_record(stats))
    out.text(f"shapes in      {stats.shapes_in:>8}")
    for c in stats.criteria:
        out.text(f"  {c:<19} {stats.rejected_by[c]:>6} rejected")
    out.text(f"inconclusive   {stats.inconclusive:>8}")
    out.text(f"survivors      {stats.survivor_count:>8}")
    for s in stats.survivors[:SURVIVORS_SHOWN]:
        out.text(f"  {s}")
    if stats.survivor_count > SURVIVORS_SHOWN:
        out.text(f"  ... {stats.survivor_count - SURVIVORS_SHOWN} more (use --format records)")
    if args.plot:
        from .plotting import plot_pipeline

        path = plot_pipeline(stats, Path(args.plot) / "pipeline.png")
        out.text(f"figure: {path}")
    return EXIT_OK


def cmd_verify_lemma(args, out):
    rep = verify_lemma_numeric(args.lemma, args.bound, args.seed, args.budget)
    out.record(records.lemma_record(rep))
    out.text(f"{rep.lemma}: {rep.domain}")
    out.text(f"  {rep.trials} trials, {len(rep.failures)} failures")
    for f in rep.failures[:10]:
        out.text(f"  failure: {f}")
    return EXIT_OK if rep.passed else EXIT_REJECT


# Parser -----------------------------------------------------------------


def _add_globals(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "records"), default=d("text"),
                   help="human text or line-delimited JSON records")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized factoring")
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET),
                   help="rho iterations allowed per factorization")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddperfect",
        description="Quadratic-residue filters and divisor-sum tools for odd perfect numbers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=fn)
        return p

    p = add("classify", cmd_classify, "classify n as deficient, perfect or abundant")
    p.add_argument("n", type=int)
    p = add("sigma", cmd_sigma, "sum of divisors of n")
    p.add_argument("n", type=int)
    p = add("factor", cmd_factor, "prime factorization of n")
    p.add_argument("n", type=int)
    p = add("divisors", cmd_divisors, "divisor count by formula, cross-checked by enumeration")
    p.add_argument("n", type=int)

    p = add("legendre", cmd_legendre, "Legendre symbol (a/p)")
    p.add_argument("a", type=int)
    p.add_argument("p", type=int)
    p = add("jacobi", cmd_jacobi, "Jacobi symbol (a/n) for odd n")
    p.add_argument("a", type=int)
    p.add_argument("n", type=int)
    p = add("recip", cmd_recip, "both Legendre symbols of a pair of odd primes")
    p.add_argument("p1", type=int)
    p.add_argument("p2", type=int)

    p = add("euler-form", cmd_euler_form, "check a factorization against the Euler form")
    p.add_argument("factorization", help="e.g. 3^2*7^2*13")

    p = add("filter", cmd_filter, "run criteria on one shape")
    p.add_argument("shape", help="e.g. 5^2*13^2*53^2@29^odd")
    p.add_argument("--criteria", type=_criteria_list, default=list(CRITERIA),
                   help=f"comma-separated subset of {','.join(CRITERIA)}")
    p.add_argument("--certificate", action="store_true",
                   help="also print the parity certificate (exact shapes only)")
    p.add_argument("--plot", metavar="DIR", help="write residue_matrix.png to DIR")

    p = add("scan", cmd_scan, "find perfect numbers in a range with a divisor-sum sieve")
    p.add_argument("--start", type=int, default=2)
    p.add_argument("--end", type=int, required=True, help=f"at most {SCAN_CEILING}")
    p.add_argument("--odd-only", action="store_true")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--block-size", type=_positive, default=1 << 22)
    p.add_argument("--plot", metavar="DIR", help="write abundancy.png to DIR")

    p = add("shapes", cmd_shapes, "enumerate candidate shapes over a prime pool")
    p.add_argument("--pool", type=_pool, required=True, help="comma-separated odd primes")
    p.add_argument("--max-k", type=int, default=3, help="largest even-part size")
    p.add_argument("--exact-exponents", type=_positive, metavar="MAX",
                   help="attach every exponent up to MAX instead of parities")

    p = add("filter-pipeline", cmd_filter_pipeline, "run criteria over shapes read from stdin")
    p.add_argument("--criteria", type=_criteria_list, default=list(CRITERIA))
    p.add_argument("--input", metavar="FILE", help="read shapes from FILE instead of stdin")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--survivor-cap", type=int, default=SURVIVOR_CAP)
    p.add_argument("--plot", metavar="DIR", help="write pipeline.png to DIR")

    p = add("verify-lemma", cmd_verify_lemma, "bounded numeric sweep for one lemma")
    p.add_argument("lemma", choices=VERIFIABLE)
    p.add_argument("--bound", type=_positive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.format)
    try:
        return args.func(args, out)
    except GrammarError as exc:
        print(f"oddperfect: error: {exc}\n{exc.pointer()}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, UsageError) as exc:
        print(f"oddperfect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompleteFactorization as exc:
        print(f"oddperfect: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except BrokenPipeError:
        return EXIT_OK
