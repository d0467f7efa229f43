"""Command-line toolkit: approximate targets by quotient witnesses, scan and
summarize twin primes, and verify claimed examples exactly.

Exit codes: 0 success, 2 usage or out-of-range target, 3 search range
exhausted without a witness, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import FactorBudget, PrimalityPolicy, SquarefreeNumber, factorize
from .families import (
    DicksonFamily,
    TargetRangeError,
    build_successor_family,
    build_twin_gap_family,
    check_admissible,
    family_from_json,
    family_to_json,
    quotient_at,
    valid_interval,
)
from .multiplicative import QuotientMode, ratio_report
from .ratio import digits_matched, ratio_to_json, truncate_decimal
from .scanner import (
    CSV_HEADER,
    record_csv_row,
    record_json,
    scan,
    summarize,
)
from .search import SearchConfig, find_witness, result_to_json
from .targets import parse_target

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_MISMATCH = 4

MODES = {
    "phi-twin-gap": QuotientMode("phi", "twin-gap"),
    "phi-prime-succ": QuotientMode("phi", "prime-successor"),
    "phi-twin-succ": QuotientMode("phi", "twin-successor"),
    "sigma-twin-gap": QuotientMode("sigma", "twin-gap"),
    "sigma-prime-succ": QuotientMode("sigma", "prime-successor"),
    "sigma-twin-succ": QuotientMode("sigma", "twin-successor"),
}


class VerificationFailure(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="totquot",
        description="Totient and sigma quotient toolkit over (twin) primes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("approximate", help="search a witness approximating a target")
    p.add_argument("--mode", required=True, choices=sorted(MODES))
    p.add_argument("--target", required=True)
    p.add_argument("--digits", type=int, default=None,
                   help="decimal digit goal; sets delta = 4e-(digits+1)")
    p.add_argument("--delta", default=None, help="relative half-width override")
    p.add_argument("--t-start", type=int, default=None)
    p.add_argument("--t-limit", type=int, default=None)
    p.add_argument("--wheel-bound", type=int, default=100)
    add_common(p)

    p = sub.add_parser("verify", help="verify the quotient at a claimed prime")
    p.add_argument("p", nargs="?", help="the prime, as a decimal string")
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--target", default=None)
    p.add_argument("--family", default=None, help="family JSON file to re-ingest")
    p.add_argument("--t", type=int, default=None, help="witness for --family")
    p.add_argument("--expect-prefix", default=None,
                   help="fail (exit 4) unless the decimal starts with this")
    p.add_argument("--trial-limit", type=int, default=10**6)
    p.add_argument("--rho-rounds", type=int, default=8)
    add_common(p)

    p = sub.add_parser("family", help="build a polynomial family and emit it")
    p.add_argument("--mode", required=True, choices=sorted(MODES))
    p.add_argument("--target", required=True)
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--delta", default=None)
    p.add_argument("--force-a", type=int, default=None)
    p.add_argument("--force-b", type=int, default=None)
    p.add_argument("--force-qprime", type=int, default=None)
    p.add_argument("--emit-json", action="store_true")
    p.add_argument("--out", default=None)
    add_common(p)

    for name, help_text in (
        ("scan", "stream every twin record up to a limit"),
        ("leaders", "running leaders among dominance failures"),
        ("stats", "counts, failure proportion and the pair-count model"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--limit", type=int, required=True)
        p.add_argument("--fn", choices=("phi", "sigma"), default="phi")
        add_common(p)

    return parser


def _resolve_delta(args, xi: Fraction, mode: QuotientMode) -> Fraction:
    if args.delta is not None:
        return Fraction(args.delta)
    digits = args.digits if args.digits is not None else 5
    delta = Fraction(4, 10 ** (digits + 1))
    if mode == QuotientMode("phi", "twin-successor"):
        bound = (1 - 3 * xi) / (3 * xi)
        if delta >= bound:
            delta = bound / 2
    return delta


def _build_family(mode: QuotientMode, xi, delta, args) -> DicksonFamily:
    if mode.shape == "twin-gap":
        force = None
        if getattr(args, "force_a", None) is not None:
            force = (_squarefree(args.force_a), _squarefree(args.force_b or 1))
        return build_twin_gap_family(mode.function, xi, delta, force_ab=force)
    force = None
    if getattr(args, "force_qprime", None) is not None:
        force = _squarefree(args.force_qprime)
    return build_successor_family(
        mode.function, mode.shape, xi, delta, force_qprime=force
    )


def _squarefree(n: int) -> SquarefreeNumber:
    f = factorize(n)
    if f.cofactor != 1 or any(e != 1 for _, e in f.entries):
        raise TargetRangeError(f"{n} is not a fully factored squarefree number")
    return SquarefreeNumber(tuple(p for p, _ in f.entries))


def _successor_t_floor(family: DicksonFamily) -> int:
    """Smallest T whose exact quotient can lie in the target interval."""
    q = Fraction(family.q.value)
    lo, hi = family.interval
    if family.mode.function == "phi":
        # phi(Q)(T-1)/(QT-2) > lo  <=>  T*(phi(Q) - lo*Q) > phi(Q) - 2*lo
        fq = family.predicted_limit * q
        a = fq - lo * q
        b = fq - 2 * lo
    else:
        # sigma(Q)(T+1)/(QT) < hi  <=>  T*(hi*Q - sigma(Q)) > sigma(Q)
        sq = family.predicted_limit * q
        a = hi * q - sq
        b = sq
    if a <= 0:
        return 1
    return max(1, b // a + 1)


def _matched_caret(decimal: str, target: Fraction) -> tuple[str, int]:
    digits = len(decimal)
    shown_target = truncate_decimal(target, max(0, digits - 2))
    width = 0
    for ca, cb in zip(decimal, shown_target):
        if ca != cb:
            break
        width += 1
    return "^" * width, width


def _cmd_approximate(args) -> int:
    mode = MODES[args.mode]
    xi = parse_target(args.target)
    interval, member = valid_interval(mode)
    if not member(xi):
        raise TargetRangeError(f"target must lie in {interval}")
    delta = _resolve_delta(args, xi, mode)
    family = _build_family(mode, xi, delta, args)
    report = check_admissible(family)
    if not report.admissible:
        raise TargetRangeError(f"family not admissible: {report.reason}")

    t_start = args.t_start if args.t_start is not None else 1
    if mode.shape != "twin-gap":
        t_start = max(t_start, _successor_t_floor(family))
    cfg = SearchConfig(
        t_start=t_start,
        t_limit=args.t_limit,
        wheel_bound=args.wheel_bound,
        policy=PrimalityPolicy(seed=args.seed),
        threads=args.threads,
    )
    result = find_witness(family, cfg)
    if result is None:
        print("no witness found in range", file=sys.stderr)
        return EXIT_NOT_FOUND
    if args.format == "json":
        print(json.dumps(result_to_json(result), indent=2))
        return EXIT_OK
    decimal = truncate_decimal(result.quotient, 30)
    caret, _ = _matched_caret(decimal, xi)
    print(f"mode            {mode}")
    print(f"target          {truncate_decimal(xi, 30)}")
    print(f"delta           {float(delta):.3g}")
    print(f"predicted limit {truncate_decimal(family.predicted_limit, 30)}")
    print(f"T               {result.t}")
    print(f"p               {result.p}")
    for value, status in result.primes:
        print(f"  prime {value} ({status})")
    print(f"quotient        {decimal}")
    print(f"                {caret}")
    print(f"digits matched  {result.digits_matched}")
    print(
        f"stats           filtered={result.stats.candidates_filtered} "
        f"tests={result.stats.primality_tests} "
        f"wall={result.stats.wall_time:.2f}s"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.family is not None:
        return _cmd_verify_family(args)
    if args.p is None or args.mode is None:
        raise TargetRangeError("verify needs a prime and --mode, or --family")
    mode = MODES[args.mode]
    p = int(args.p)
    target = parse_target(args.target) if args.target else None
    budget = FactorBudget(trial_limit=args.trial_limit, rho_rounds=args.rho_rounds)
    policy = PrimalityPolicy(seed=args.seed)
    try:
        report = ratio_report(p, mode, budget, policy, target=target)
    except ValueError as exc:
        raise VerificationFailure(str(exc)) from exc
    decimal = report.decimal
    if args.expect_prefix is not None and not decimal.startswith(args.expect_prefix):
        print(f"mismatch: {decimal} does not start with {args.expect_prefix}",
              file=sys.stderr)
        return EXIT_MISMATCH
    if args.format == "json":
        doc = {
            "p": str(p),
            "mode": {"function": mode.function, "shape": mode.shape},
            "quotient": {**ratio_to_json(report.quotient), "decimal": decimal},
            "digits_matched": report.digits_matched,
            "conditional": report.conditional,
            "numerator": _fact_json(report.numerator_factorization),
            "denominator": _fact_json(report.denominator_factorization),
        }
        if target is not None:
            doc["target"] = ratio_to_json(target)
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"p          {p}")
    print(f"mode       {mode}")
    print(f"numerator  {_fact_text(report.numerator_factorization)}")
    print(f"denominator {_fact_text(report.denominator_factorization)}")
    print(f"quotient   {decimal}")
    if target is not None:
        caret, _ = _matched_caret(decimal, target)
        print(f"           {caret}")
        print(f"digits matched {report.digits_matched}")
    if report.conditional:
        print("note: conditional on a probable-prime factor")
    return EXIT_OK


def _cmd_verify_family(args) -> int:
    with open(args.family) as fh:
        family = family_from_json(json.load(fh))
    if args.t is None:
        raise TargetRangeError("--family verification needs --t")
    policy = PrimalityPolicy(seed=args.seed)
    try:
        quotient = quotient_at(family, args.t, policy)
    except ValueError as exc:
        raise VerificationFailure(str(exc)) from exc
    doc = {
        "T": str(args.t),
        "quotient": {
            **ratio_to_json(quotient),
            "decimal": truncate_decimal(quotient, 40),
        },
    }
    if args.target:
        doc["digits_matched"] = digits_matched(quotient, parse_target(args.target))
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"T        {args.t}")
        print(f"quotient {doc['quotient']['num']}/{doc['quotient']['den']}")
        print(f"decimal  {doc['quotient']['decimal']}")
        if "digits_matched" in doc:
            print(f"digits matched {doc['digits_matched']}")
    return EXIT_OK


def _fact_json(f) -> dict:
    return {
        "factors": [[str(p), e] for p, e in f.entries],
        "cofactor": str(f.cofactor),
        "status": f.cofactor_status.value,
    }


def _fact_text(f) -> str:
    parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in f.entries]
    if f.cofactor != 1:
        parts.append(f"[{f.cofactor} {f.cofactor_status.value}]")
    return " * ".join(parts) if parts else "1"


def _cmd_family(args) -> int:
    mode = MODES[args.mode]
    xi = parse_target(args.target)
    interval, member = valid_interval(mode)
    if not member(xi):
        raise TargetRangeError(f"target must lie in {interval}")
    delta = _resolve_delta(args, xi, mode)
    family = _build_family(mode, xi, delta, args)
    report = check_admissible(family)
    doc = family_to_json(family)
    if args.emit_json or args.format == "json":
        text = json.dumps(doc, indent=2)
    else:
        lines = [
            f"mode            {mode}",
            f"admissible      {report.admissible}",
            f"predicted limit {truncate_decimal(family.predicted_limit, 30)}",
        ]
        for f in family.polys:
            lines.append(f"  poly {f}")
        text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _cmd_scan(args) -> int:
    records = scan(args.limit, args.fn, args.threads)
    if args.format == "csv":
        print(CSV_HEADER)
        for record in records:
            print(record_csv_row(record))
    elif args.format == "json":
        print(json.dumps([record_json(r) for r in records], indent=2))
    else:
        for r in records:
            flag = " failure" if r.is_failure else ""
            print(f"p={r.p} ratio={r.ratio} ({truncate_decimal(r.ratio, 6)}){flag}")
    return EXIT_OK


def _cmd_leaders(args) -> int:
    summary = summarize(args.limit, args.fn, args.threads)
    if args.format == "json":
        print(json.dumps({
            "limit": summary.limit,
            "fn": summary.fn,
            "leaders": [record_json(r) for r in summary.leaders],
        }, indent=2))
    elif args.format == "csv":
        print(CSV_HEADER)
        for r in summary.leaders:
            print(record_csv_row(r))
    else:
        for r in summary.leaders:
            print(f"p={r.p} ratio={truncate_decimal(r.ratio, 6)}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    summary = summarize(args.limit, args.fn, args.threads)
    doc = {
        "limit": summary.limit,
        "fn": summary.fn,
        "twin_count": summary.twin_count,
        "failure_count": summary.failure_count,
        "failure_fraction": summary.failure_fraction,
        "pi2_estimate": summary.pi2_estimate,
        "c2": summary.c2,
    }
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for key, value in doc.items():
            print(f"{key:17} {value}")
    return EXIT_OK


_COMMANDS = {
    "approximate": _cmd_approximate,
    "verify": _cmd_verify,
    "family": _cmd_family,
    "scan": _cmd_scan,
    "leaders": _cmd_leaders,
    "stats": _cmd_stats,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (TargetRangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
