"""Command-line front end.

    dualcheck analyze <file> [--format text|json-like]
    dualcheck solve <file> [--format text|json-like]
    dualcheck corpus list
    dualcheck corpus run [id]

Exit codes: 0 success; 2 parse/validation error or unknown id; 3 internal
inconsistency detected by the implication graph; 4 undecidable values
(solve only).  A detected duality gap is a finding, not an error.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import corpus as corpus_mod
from .conditions import diagnose
from .errors import (
    DualcheckError,
    MalformedInputError,
    NotFoundError,
    ParseError,
    UndecidableValueError,
)
from .engine import value_report
from .probfile import SetFactsInstance, load_problem
from .reportfmt import (
    diagnosis_to_structured,
    diagnosis_to_text,
    dumps_structured,
    render_extreal,
    setfacts_to_structured,
    setfacts_to_text,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_UNDECIDABLE = 4


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dualcheck",
        description="exact diagnostics for regularity conditions in convex duality",
    )
    ap.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for the randomized property suites",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    ana = sub.add_parser("analyze", help="diagnose the instance in a problem file")
    ana.add_argument("path")
    ana.add_argument("--format", choices=("text", "json-like"), default="text")

    sol = sub.add_parser("solve", help="print exact primal/dual values")
    sol.add_argument("path")
    sol.add_argument("--format", choices=("text", "json-like"), default="text")

    cor = sub.add_parser("corpus", help="list or replay the regression corpus")
    cor.add_argument("action", choices=("list", "run"))
    cor.add_argument("entry", nargs="?", default=None)
    return ap


def cmd_analyze(path: str, fmt: str) -> int:
    try:
        pf = load_problem(path)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(pf.instance, SetFactsInstance):
        if fmt == "text":
            sys.stdout.write(setfacts_to_text(pf.instance))
        else:
            sys.stdout.write(dumps_structured(setfacts_to_structured(pf.instance)))
        return EXIT_OK
    try:
        d = diagnose(pf.instance)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if fmt == "text":
        sys.stdout.write(diagnosis_to_text(d))
    else:
        sys.stdout.write(dumps_structured(diagnosis_to_structured(d)))
    return EXIT_OK if d.consistency[0] else EXIT_INCONSISTENT


def cmd_solve(path: str, fmt: str) -> int:
    try:
        pf = load_problem(path)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if isinstance(pf.instance, SetFactsInstance):
        print("error: a set-facts file carries no optimization problem", file=sys.stderr)
        return EXIT_PARSE
    try:
        rep = value_report(pf.instance)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if rep.vp is None or rep.vd is None:
        print("error: values undecidable for this instance", file=sys.stderr)
        return EXIT_UNDECIDABLE
    if fmt == "json-like":
        from .reportfmt import _render_solution, _values_dict

        doc = {"problem": getattr(pf.instance, "instance_id", ""), "values": _values_dict(rep)}
        sys.stdout.write(dumps_structured(doc))
        return EXIT_OK
    print(f"primal  {render_extreal(rep.vp)}" + ("  (attained)" if rep.vp_attained else ""))
    print(f"dual    {render_extreal(rep.vd)}" + ("  (attained)" if rep.vd_attained else ""))
    gap = render_extreal(rep.gap) if rep.gap_applicable else "n/a"
    print(f"gap     {gap}")
    return EXIT_OK


def cmd_corpus(action: str, entry: str) -> int:
    if action == "list":
        for name in corpus_mod.list_entries():
            print(name)
        return EXIT_OK
    try:
        if entry is None or entry == "all":
            results = corpus_mod.run_all()
        else:
            results = (corpus_mod.run(entry),)
    except NotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    failed = 0
    for res in results:
        mark = "pass" if res.passed else "FAIL"
        print(f"{mark}  {res.entry_id}  ({res.checked} checks)")
        for diff in res.diffs:
            print(f"      {diff}")
        if not res.passed:
            failed += 1
    return EXIT_OK if failed == 0 else 1


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        if args.command == "analyze":
            return cmd_analyze(args.path, args.format)
        if args.command == "solve":
            return cmd_solve(args.path, args.format)
        return cmd_corpus(args.action, args.entry)
    except DualcheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
