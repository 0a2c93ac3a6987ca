"""Command-line entry point: ``verma-pde <subcommand> ...``.

Exit codes: 0 success, 1 reducible (irreducible subcommand only), 2 bad
input, 3 unknown records under --strict, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import checks, oracle, render
from .algebra import TruncationPolicy, format_rational
from .operators import Weight, apply_d, weight_eigenvalues
from .singular import (
    UNKNOWN,
    YES,
    SolutionRecord,
    default_depth,
    enumerate_solutions,
    independence_check,
    irreducibility_report,
    oracle_confirms,
    polynomial_verdict,
)


class InputError(ValueError):
    pass


def _weight(args: argparse.Namespace) -> Weight:
    try:
        return Weight.parse(args.weight, args.n)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid weight {args.weight!r}: {exc}") from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_document(lam: Weight, depth: int, records: Sequence[SolutionRecord]) -> dict:
    return {
        "n": lam.n,
        "weight": [format_rational(x) for x in lam.lam],
        "depth": depth,
        "records": [r.to_json() for r in records],
    }


def _format_records(fmt: str, lam: Weight, depth: int, records: Sequence[SolutionRecord]) -> str:
    if fmt == "json":
        return json.dumps(_records_document(lam, depth, records), indent=2) + "\n"
    if fmt == "latex":
        lines = [render.latex_record(r, lam.n) + r" \\" for r in records]
        return "\\begin{align*}\n" + "\n".join(lines) + "\n\\end{align*}\n"
    return "\n".join(render.text_record(r, lam.n) for r in records) + "\n"


def cmd_enumerate(args: argparse.Namespace) -> int:
    lam = _weight(args)
    depth = args.depth or default_depth(lam)
    records = enumerate_solutions(lam, TruncationPolicy(depth), workers=args.workers)
    _emit(_format_records(args.format, lam, depth, records), args.output)
    poly = sum(r.polynomial == YES for r in records)
    unknown = sum(r.polynomial == UNKNOWN for r in records)
    report = independence_check(records)
    print(f"{len(records)} records, {poly} polynomial, {unknown} unknown (depth {depth})",
          file=sys.stderr)
    for a, b in report.duplicates:
        print(f"note: records {a} and {b} coincide", file=sys.stderr)
    if args.strict and unknown:
        return 3
    return 0


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _verify_record(lam: Weight, rec: SolutionRecord) -> list[str]:
    problems = []
    s = rec.series
    if s.is_zero():
        return ["series is zero"]
    for i in range(1, lam.n):
        if not apply_d(i, lam, s).is_zero():
            problems.append(f"d{i} does not vanish")
    w = weight_eigenvalues(lam, s)
    if w is None:
        problems.append("series is not a weight vector")
    elif w != rec.weight:
        problems.append("stored weight does not match")
    if s.leading(lam.n)[1] != 1:
        problems.append("leading coefficient is not 1")
    verdict = polynomial_verdict(lam, s)
    if verdict != rec.polynomial:
        problems.append(f"stored verdict {rec.polynomial} but recomputed {verdict}")
    if verdict == YES and not oracle_confirms(rec, lam):
        problems.append("not a singular vector of the Verma module")
    return problems


def cmd_verify(args: argparse.Namespace) -> int:
    doc = _load(args.records)
    try:
        lam = Weight(tuple(doc["weight"]))
        records = [SolutionRecord.from_json(r) for r in doc["records"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed record file: {exc}") from exc
    failed = 0
    for rec in records:
        problems = _verify_record(lam, rec)
        label = ",".join(str(i) for i in rec.index)
        if problems:
            failed += 1
            print(f"FAIL [{label}]: " + "; ".join(problems), file=sys.stderr)
        else:
            print(f"ok   [{label}]")
    print(f"{len(records) - failed}/{len(records)} records verified", file=sys.stderr)
    return 4 if failed else 0


def _parse_drop(text: str, n: int) -> tuple[int, ...]:
    try:
        drop = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise InputError(f"malformed drop {text!r}") from exc
    if len(drop) != n - 1 or any(k < 0 for k in drop):
        raise InputError(f"drop needs {n - 1} nonnegative integers, got {text!r}")
    return drop


def cmd_oracle(args: argparse.Namespace) -> int:
    lam = _weight(args)
    drop = _parse_drop(args.drop, lam.n)
    kernel = oracle.singular_kernel(lam, drop)
    if args.format == "json":
        data = {
            "n": lam.n,
            "weight": [format_rational(x) for x in lam.lam],
            "drop": list(drop),
            "basis": [[{"alpha": [[i, j, e] for (i, j), e in a.exps], "coeff": format_rational(c)}
                       for a, c in v.sorted_terms(lam.n)] for v in kernel],
        }
        _emit(json.dumps(data, indent=2) + "\n", args.output)
    elif args.format == "latex":
        lines = [render.latex_series(oracle.tau(v), lam.n) for v in kernel]
        _emit("\n".join(lines) + ("\n" if lines else ""), args.output)
    else:
        head = f"singular vectors at drop {drop}: {len(kernel)}\n"
        body = "".join(f"  {' + '.join(f'{c}*{a}' for a, c in v.sorted_terms(lam.n))}\n"
                       for v in kernel)
        _emit(head + body, args.output)
    return 0


def cmd_irreducible(args: argparse.Namespace) -> int:
    lam = _weight(args)
    rep = irreducibility_report(lam)
    lines = [f"weight {lam}: {'irreducible' if rep.irreducible else 'reducible'}"]
    for a, b, v in rep.segments:
        mark = " <- positive integer" if (a, b) in rep.triggering else ""
        lines.append(f"  segment {a}..{b}: {v}{mark}")
    if rep.readings_diverge:
        lines.append("  note: a segment value is 0; the reading that also excludes 0 "
                     "would call this weight reducible")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if rep.irreducible else 1


def cmd_render(args: argparse.Namespace) -> int:
    doc = _load(args.records)
    try:
        lam = Weight(tuple(doc["weight"]))
        records = [SolutionRecord.from_json(r) for r in doc["records"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed record file: {exc}") from exc
    fmt = args.format if args.format != "json" else "text"
    _emit(_format_records(fmt, lam, doc.get("depth", 0), records), args.output)
    return 0


def cmd_identities(args: argparse.Namespace) -> int:
    seed = 0 if args.seed is None else args.seed
    failed = 0
    names = [args.suite] if args.suite else list(checks.SUITES)
    for name in names:
        results = checks.run_suite(name, args.count, seed, depth=args.depth or checks.DEPTH)
        bad = [r for r in results if not r.ok]
        failed += len(bad)
        print(f"{name}: {len(results) - len(bad)}/{len(results)} passed")
        for r in bad:
            print(f"  FAIL {r.detail}", file=sys.stderr)
    return 4 if failed else 0


def _depth(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("depth must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verma-pde", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, weight: bool = True) -> None:
        if weight:
            p.add_argument("--n", type=int, required=True, help="rank plus one of sl(n)")
            p.add_argument("--weight", required=True, help="comma separated rationals, e.g. 1/3,2")
        p.add_argument("--depth", type=_depth, help="deep-degree truncation bound")
        p.add_argument("--format", choices=["json", "latex", "text"], default="json")
        p.add_argument("--output", help="write data here instead of stdout")

    p = sub.add_parser("enumerate", help="all n! candidate solutions for a weight")
    common(p)
    p.add_argument("--strict", action="store_true", help="exit 3 if any record is truncated-unknown")
    p.add_argument("--workers", type=int, default=None, help="evaluate candidates in parallel")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="recheck a record file produced by enumerate")
    p.add_argument("records")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="singular vectors at one weight drop by elimination")
    common(p)
    p.add_argument("--drop", required=True, help="comma separated nonnegative integers")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("irreducible", help="segment test for irreducibility")
    common(p)
    p.set_defaults(func=cmd_irreducible)

    p = sub.add_parser("render", help="render a record file as text or LaTeX")
    p.add_argument("records")
    common(p, weight=False)
    p.set_defaults(func=cmd_render, format="text")

    p = sub.add_parser("identities", help="randomized operator identity checks")
    common(p, weight=False)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--suite", choices=sorted(checks.SUITES))
    p.set_defaults(func=cmd_identities)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Let ``--weight -1,2`` through; argparse would read -1,2 as an option."""
    out: list[str] = []
    k = 0
    while k < len(argv):
        a = argv[k]
        if a in ("--weight", "--drop") and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    if getattr(args, "n", None) is not None and args.n < 2:
        print("error: --n must be at least 2", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
