"""Command-line front end.

Exit codes: 0 when the run reaches every desired state, 2 on UNSAT, 1 on any
input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .dot import export_dot
from .formats import LoadError, dumps_trace, load_automaton, load_scenario
from .objective import MODES, REDUNDANCY_FIRST, RiskProfile
from .randomized import self_check
from .simulator import compare_profiles, run_scenario

EXIT_SAT = 0
EXIT_INPUT = 1
EXIT_UNSAT = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as UNSAT
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pta-mpc", description="Risk-averse receding-horizon control over priced timed automata.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="simulate a failure scenario")
    run.add_argument("automaton", help="automaton JSON file")
    run.add_argument("scenario", help="scenario JSON file")
    run.add_argument("--profile", choices=MODES, default=REDUNDANCY_FIRST)
    run.add_argument("--lambda", dest="risk_weight", type=float, default=1.0, help="risk weight (default 1)")
    run.add_argument("--trace", metavar="FILE", help="write the JSON-lines trace here ('-' for stdout)")
    run.add_argument("--compare", action="store_true", help="also run the other profile and print a comparison")
    run.add_argument("--dot", metavar="FILE", help="write a DOT rendering of the automaton and realized path")
    run.add_argument("--seed-check", action="store_true", help="run randomized oracle self-checks first")

    dot = sub.add_parser("dot", help="export an automaton as DOT")
    dot.add_argument("automaton")
    dot.add_argument("-o", "--output", default="-")
    return parser


def _write(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _run(args: argparse.Namespace) -> int:
    if args.seed_check:
        failures = self_check()
        for f in failures:
            print(f"seed-check: {f}", file=sys.stderr)
        if failures:
            return EXIT_INPUT
        print("seed-check: ok", file=sys.stderr)
    try:
        profile = RiskProfile(args.profile, args.risk_weight)
    except ValueError as exc:
        print(f"pta-mpc: {exc}", file=sys.stderr)
        return EXIT_INPUT
    automaton = load_automaton(args.automaton)
    script = load_scenario(args.scenario, automaton)
    trace = run_scenario(automaton, script, profile)
    if args.trace:
        _write(args.trace, dumps_trace(trace, automaton))
    if args.dot:
        _write(args.dot, export_dot(automaton, trace))
    if args.compare:
        report = compare_profiles(automaton, script, args.risk_weight)
        print(json.dumps(report.to_dict(), indent=2))
    sc = trace.realized_score
    print(
        f"{trace.final_verdict.upper()} {' '.join(trace.realized_path.sequence)} "
        f"value={sc.value:.3f} escapes={sc.escape_count}"
    )
    if trace.diagnostic:
        print(trace.diagnostic, file=sys.stderr)
    return EXIT_SAT if trace.final_verdict == "sat" else EXIT_UNSAT


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "dot":
            _write(args.output, export_dot(load_automaton(args.automaton)))
            return EXIT_SAT
        return _run(args)
    except (LoadError, OSError) as exc:
        print(f"pta-mpc: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
