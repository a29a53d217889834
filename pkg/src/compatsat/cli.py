"""Command-line entry point: ``compatsat {decide,oracle,fuzz,example,convert}``.

Exit codes: 10 satisfiable / claimed satisfiable, 20 unsatisfiable / UNSAT
pattern, 0 success without a verdict, 1 usage error, 2 DIMACS parse error,
3 too many variables for the oracle, 4 soundness violation while fuzzing,
5 golden-table mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dimacs
from .engine import decide
from .generate import WORKED_EXAMPLES
from .golden import verify_example
from .harness import SoundnessViolation, finding_records, fuzz, instance_specs
from .oracle import TooManyVariables, enumerate_solve, solve_subformula
from .trace import JsonlTraceWriter

EXIT_SAT, EXIT_UNSAT = 10, 20
EXIT_USAGE, EXIT_PARSE, EXIT_TOO_MANY, EXIT_SOUNDNESS, EXIT_GOLDEN = 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path: str):
    if path == "-":
        return dimacs.parse_dimacs(sys.stdin.read())
    return dimacs.read_dimacs(path)


def _model_line(model) -> str:
    return "v " + " ".join(str(v if model[v] else -v) for v in sorted(model)) + " 0"


def cmd_decide(args) -> int:
    formula = _load(args.file)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            verdict = decide(formula, JsonlTraceWriter(fh), backward=args.backward)
    else:
        verdict = decide(formula, backward=args.backward)
    print(verdict.summary())
    if args.backward and not verdict.unsat:
        print(_model_line(verdict.model) if verdict.model is not None else "model: not found")
    if args.core_check and verdict.unsat:
        for pair in verdict.false_pairs:
            core = sorted(verdict.core_candidates[pair])
            try:
                status = solve_subformula(formula, core).status.value
            except TooManyVariables:
                status = "UNKNOWN"
            agree = "agree" if status == "UNSAT" else "DISAGREE"
            print(f"core pair=({pair[0]},{pair[1]}) clauses={{{','.join(map(str, core))}}} oracle={status} {agree}")
    return EXIT_UNSAT if verdict.unsat else EXIT_SAT


def cmd_oracle(args) -> int:
    formula = _load(args.file)
    try:
        res = enumerate_solve(formula, count_models=args.count)
    except TooManyVariables as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOO_MANY
    line = res.status.value
    if args.count:
        line += f" models={res.model_count}"
    print(line)
    if res.sat:
        print(_model_line(res.witness))
    return EXIT_SAT if res.sat else EXIT_UNSAT


def cmd_fuzz(args) -> int:
    if args.n > 20:
        raise UsageError("--n must be <= 20 so the oracle stays exact")
    if args.count < 0 or args.m < 0 or args.jobs < 1:
        raise UsageError("--count and --m must be nonnegative, --jobs positive")
    if not 1 <= args.k <= args.n:
        raise UsageError("need 1 <= --k <= --n")
    specs = instance_specs(args.n, args.m, args.k, args.count, args.seed)
    report = open(args.report, "w", encoding="utf-8") if args.report else None
    try:
        summary, _ = fuzz(specs, report, workers=args.jobs)
    except SoundnessViolation as e:
        print(f"SOUNDNESS VIOLATION: {e}", file=sys.stderr)
        for rec in finding_records(e.result):
            print(json.dumps(rec), file=sys.stderr)
        return EXIT_SOUNDNESS
    finally:
        if report:
            report.close()
    for line in summary.lines():
        print(line)
    return 0


def cmd_example(args) -> int:
    failed = False
    for label, ok, detail in verify_example(args.id):
        print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
        failed |= not ok
    return EXIT_GOLDEN if failed else 0


def cmd_convert(args) -> int:
    text = dimacs.emit_dimacs(_load(args.input))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="compatsat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decide", help="run the compatibility-matrix procedure on a DIMACS file")
    d.add_argument("file")
    d.add_argument("--trace", metavar="PATH", help="write JSON-lines trace events")
    d.add_argument("--backward", action="store_true", help="run the backward closure and extract a model")
    d.add_argument("--core-check", action="store_true", help="check each core candidate with the oracle")
    d.set_defaults(func=cmd_decide)

    o = sub.add_parser("oracle", help="brute-force SAT check")
    o.add_argument("file")
    o.add_argument("--count", action="store_true", help="count models (n <= 26)")
    o.set_defaults(func=cmd_oracle)

    f = sub.add_parser("fuzz", help="differential test against the oracle on random k-SAT")
    f.add_argument("--n", type=int, default=10)
    f.add_argument("--m", type=int, default=43)
    f.add_argument("--k", type=int, default=3)
    f.add_argument("--count", type=int, default=100)
    f.add_argument("--seed", type=int, default=1)
    f.add_argument("--report", metavar="PATH", help="JSON-lines findings report")
    f.add_argument("--jobs", type=int, default=1, help="worker processes")
    f.set_defaults(func=cmd_fuzz)

    e = sub.add_parser("example", help="replay a worked example against its reference tables")
    e.add_argument("id", choices=sorted(WORKED_EXAMPLES))
    e.set_defaults(func=cmd_example)

    c = sub.add_parser("convert", help="normalize a DIMACS file")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_convert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"compatsat: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except dimacs.DimacsError as e:
        print(f"{getattr(args, 'file', None) or getattr(args, 'input', '')}: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"compatsat: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
