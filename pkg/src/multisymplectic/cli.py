"""``multisym``: run scenario files or the built-in suite and emit a canonical report.

Exit codes: 0 every task passed, 1 some task failed, 2 the scenario could not
be parsed (the message names the location), 3 an object violated an
invariant when loaded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .builtins import BUILTINS, builtin_document
from .scenario import ScenarioInvariantError, ScenarioParseError, load_scenario
from .tasks import Report, run_scenario

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


def render(report: Report, fmt: str, timing: bool = False) -> str:
    if fmt == "text":
        return report.to_text(timing)
    return json.dumps(report.to_json(timing), sort_keys=True, indent=2) + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multisym", description="Exact checks of multisymplectic constructions.")
    ap.add_argument("--list-builtins", action="store_true", help="print the built-in scenario names and exit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--tuples", type=int, default=None, help="random tuples per arity")
    common.add_argument("--max-arity", type=int, default=None)
    common.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte identity)")
    common.add_argument("--jobs", type=int, default=1, help="run tasks in this many worker processes")
    sub = ap.add_subparsers(dest="command")
    v = sub.add_parser("verify", parents=[common], help="run a scenario file")
    v.add_argument("file", type=Path)
    b = sub.add_parser("run-builtin", parents=[common], help="run a built-in scenario")
    b.add_argument("name")
    return ap


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    if args.list_builtins:
        for name, (desc, _) in BUILTINS.items():
            print(f"{name}\t{desc}")
        return EXIT_PASS
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_PARSE
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "verify":
            try:
                text = args.file.read_text()
            except OSError as e:
                raise ScenarioParseError(str(args.file), e.strerror or str(e)) from e
            try:
                doc = json.loads(text)
            except json.JSONDecodeError as e:
                raise ScenarioParseError(f"{args.file}: line {e.lineno} column {e.colno}", e.msg) from e
        else:
            if args.name not in BUILTINS:
                raise ScenarioParseError("run-builtin", f"unknown built-in {args.name!r}")
            doc = builtin_document(args.name)
        sc = load_scenario(doc)
        overrides = {"tuples": args.tuples, "max_arity": args.max_arity}
        report = run_scenario(sc, args.seed, overrides, jobs=args.jobs, document=doc)
    except ScenarioParseError as e:
        print(f"parse error at {e}", file=sys.stderr)
        return EXIT_PARSE
    except ScenarioInvariantError as e:
        print(f"invariant violation at {e}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(render(report, args.format, args.timing), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
