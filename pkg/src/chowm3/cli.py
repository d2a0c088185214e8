"""Command line: ``python -m chowm3 <group> <target> [options]``.

Writes ``reports.jsonl`` (one context line, then one line per check, sorted
by module and check name) and ``summary.txt`` into ``--out`` and prints the
summary.  Exit status: 0 when every check passes, 1 when one fails, 3 when
none fails but a computation ran out of budget, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import suites
from .report import FAIL, INCONCLUSIVE, dump_lines, render_summary

COMMANDS = {
    "verify": ("appendix", "presentation"),
    "simplify": ("rational",),
    "compare": ("faber",),
    "emit": ("classes",),
    "report": ("all",),
}

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _variants(text):
    if text == "search" or text.startswith("fixed:"):
        return text
    raise argparse.ArgumentTypeError("expected 'search' or 'fixed:<relation>=<reading>,...'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-N", type=int, default=8, dest="max_N",
                        help="largest number of roots for the binary form checks (default 8)")
    common.add_argument("--budget", type=int, default=None,
                        help="step limit for Buchberger runs (default unlimited)")
    common.add_argument("--out", default="chowm3-reports", help="output directory")
    common.add_argument("--variants", type=_variants, default="search",
                        help="'search' or 'fixed:<relation>=<reading>,...'")
    common.add_argument("--degree-bound", type=int, default=6, dest="degree_bound",
                        help="top degree for generator counts and Hilbert functions (default 6)")
    parser = argparse.ArgumentParser(prog="python -m chowm3", description=__doc__.split("\n")[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, targets in COMMANDS.items():
        sub = groups.add_parser(group)
        sub.add_argument("target", choices=targets)
        for action in common._actions:
            sub._add_action(action)
    return parser


def collect(group: str, target: str, args) -> list:
    bound = args.degree_bound
    if (group, target) == ("verify", "appendix"):
        return suites.appendix(args.max_N)
    if (group, target) == ("emit", "classes"):
        return suites.classes()
    pres, p = suites.presentation(args.variants, bound)
    if (group, target) == ("verify", "presentation"):
        return pres
    simp, s = suites.simplification(p, bound, args.budget)
    if (group, target) == ("simplify", "rational"):
        return simp
    fab = suites.faber_comparison(s, bound)
    if (group, target) == ("compare", "faber"):
        return fab
    return [*suites.appendix(args.max_N), *pres, *simp, *fab, *suites.classes()]


def exit_status(reports) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return EXIT_FAIL
    if INCONCLUSIVE in statuses:
        return EXIT_BUDGET
    return EXIT_OK


def emit_report(reports, out: Path) -> str:
    if not reports:
        raise ValueError("nothing to report")
    out.mkdir(parents=True, exist_ok=True)
    context = json.dumps(suites.context_record(), ensure_ascii=False, separators=(",", ":"))
    (out / "reports.jsonl").write_text(context + "\n" + dump_lines(reports))
    summary = render_summary(reports)
    (out / "summary.txt").write_text(summary)
    return summary


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    reports = collect(args.group, args.target, args)
    summary = emit_report(reports, Path(args.out))
    sys.stdout.write(summary)
    return exit_status(reports)
