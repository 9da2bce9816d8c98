"""Command line entry point: ``forge verify``, ``forge report``, ``forge parse``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .dsl import ParseError, parse
from .suite import DEFAULT_BOUND, Workspace, exit_code, run_suite, to_json, to_text


def _workspace(path: Optional[str]) -> Workspace:
    ws = Workspace.default()
    if path:
        ws.merge(parse(Path(path).read_text(encoding="utf-8")))
    return ws


def _bound(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("bound must be nonnegative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forge", description="Verify the genus-2 bundle construction.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run checks and print results")
    v.add_argument("file", nargs="?", help="DSL file overriding or extending the default construction")
    v.add_argument("--check", metavar="PATTERN", help="glob over check ids (or an alias such as h1v)")
    v.add_argument("--bound", type=_bound, default=DEFAULT_BOUND, help="conjugator search bound (default 16)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--no-timing", action="store_true", help="report ms as 0 for byte-stable output")

    r = sub.add_parser("report", help="run every check and write a JSON report")
    r.add_argument("--out", required=True, help="output path")
    r.add_argument("--bound", type=_bound, default=DEFAULT_BOUND)
    r.add_argument("--no-timing", action="store_true")
    r.add_argument("file", nargs="?")

    s = sub.add_parser("parse", help="syntax-check a DSL file")
    s.add_argument("file")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "parse":
            nodes = parse(Path(args.file).read_text(encoding="utf-8"))
            print(f"{args.file}: ok ({len(nodes)} statements)")
            return 0
        ws = _workspace(args.file)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"forge: {exc}", file=sys.stderr)
        return 1

    timing = not args.no_timing
    if args.command == "verify":
        results = run_suite(args.check, args.bound, ws, timing)
        if not results:
            print(f"forge: no check matches {args.check!r}", file=sys.stderr)
            return 1
        sys.stdout.write(to_json(results, args.bound) if args.format == "json" else to_text(results, args.bound))
        return exit_code(results)

    results = run_suite(None, args.bound, ws, timing)
    Path(args.out).write_text(to_json(results, args.bound), encoding="utf-8")
    print(f"wrote {args.out}: {len(results)} checks")
    return exit_code(results)


if __name__ == "__main__":
    sys.exit(main())
