"""Command line entry point: ``poissonlab <command> --input FILE ...``.

Exit codes: 0 success, 1 mathematical failure (Jacobi identity or
flatness), 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .parser import ParseError, parse_assignments, parse_problem_file
from .report import InputError, emit_report, run_command

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", required=True, metavar="FILE", help="problem file")
    common.add_argument("--specialize", nargs="+", metavar="KEY=VAL",
                        help="parameter values, or 'generic' for random distinct primes")
    common.add_argument("--seed", type=int, help="seed for --specialize generic (default 0)")
    common.add_argument("--max-degree", type=int, default=4, help="degree bound for ham-solve")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = _Parser(prog="poissonlab", description="Exact computations with polynomial Poisson structures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify", parents=[common], help="check [pi, pi] = 0")
    p = sub.add_parser("bracket", parents=[common], help="Poisson bracket {f, g}")
    p.add_argument("f")
    p.add_argument("g")
    p = sub.add_parser("hamiltonian", parents=[common], help="hamiltonian vector field of f")
    p.add_argument("f")
    sub.add_parser("modular", parents=[common], help="modular vector field")
    sub.add_parser("rank", parents=[common], help="generic rank")
    sub.add_parser("strata", parents=[common], help="degeneracy loci")
    p = sub.add_parser("residues", parents=[common], help="residues of a line module")
    p.add_argument("--module", default=None, help="field name from the input file (default: canonical)")
    p.add_argument("--k", type=int, default=None)
    p = sub.add_parser("foliation-check", parents=[common], help="membership in the symplectic foliation")
    p.add_argument("name")
    p = sub.add_parser("ham-solve", parents=[common], help="degree-bounded search for f with X_f = Z")
    p.add_argument("name")
    sub.add_parser("report", parents=[common], help="full pipeline")
    return parser


def _specialize_arg(raw: Optional[List[str]], ctx):
    if raw is None:
        return None
    if raw == ["generic"]:
        return "generic"
    parts = [part for chunk in raw for part in chunk.split(",") if part.strip()]
    return parse_assignments(", ".join(parts), ctx)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"poissonlab: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        pf = parse_problem_file(text)
        positional = []
        if args.command == "bracket":
            positional = [args.f, args.g]
        elif args.command == "hamiltonian":
            positional = [args.f]
        elif args.command in ("foliation-check", "ham-solve"):
            positional = [args.name]
        report = run_command(
            pf, args.command, positional, input_text=text,
            specialize=_specialize_arg(args.specialize, pf.ctx), seed=args.seed,
            max_degree=args.max_degree,
            module=getattr(args, "module", None), k=getattr(args, "k", None),
        )
    except ParseError as exc:
        print(f"{args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        print(f"poissonlab: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    if report.status != "ok":
        print(f"poissonlab: {report.status.replace('_', ' ')}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
