"""Command-line entry point: ``realtopos check|suite FILE`` and ``realtopos repl``."""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .session import Config, run

EXIT_USAGE = 2


def _config(args) -> Config:
    given = {k: getattr(args, k) for k in ("fuel", "depth", "seed") if getattr(args, k) is not None}
    return Config(timing=args.timing, pinned=frozenset(given), **given)


def _line(e) -> str:
    tail = e.get("realizer") or e.get("message") or e.get("reason") or ""
    return f"{e['line']:>4}  {e['verdict']:<7} {e['query']}" + (f"  [{tail}]" if tail else "")


def _emit(report, args, out):
    for e in report["results"]:
        print(_line(e), file=out)
    s = report["summary"]
    print(f"-- {s['queries']} queries: {s['yes']} yes, {s['no']} no, {s['unknown']} unknown, "
          f"{s['errors']} errors", file=out)
    if args.json:
        text = json.dumps(report, indent=2) + "\n"
        if args.json == "-":
            out.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            src = fh.read()
    except OSError as exc:
        raise SystemExit(f"realtopos: {exc}") from None
    return src


def cmd_run(args, suites_only=False, out=None) -> int:
    out = out or sys.stdout
    src = _load(args.file)
    try:
        session = dsl.parse(src)
    except dsl.DslError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_USAGE
    if suites_only:
        stmts = tuple(s for s in session.statements
                      if not isinstance(s, dsl.QUERIES) or isinstance(s, dsl.SuiteQ))
        session = dsl.Session(stmts)
        if not session.queries:
            print(f"{args.file}: no suite queries", file=sys.stderr)
            return EXIT_USAGE
    report = run(session, _config(args), jobs=args.jobs, source=args.file)
    _emit(report, args, out)
    return report["exit_code"]


def cmd_repl(args, inp=None, out=None) -> int:
    """Statements accumulate; each query is answered as soon as it is complete."""
    inp, out = inp or sys.stdin, out or sys.stdout
    cfg = _config(args)
    decls: list[str] = []
    buf = ""
    interactive = inp.isatty()
    status = 0
    while True:
        if interactive:
            out.write("rz> " if not buf.strip() else "..> ")
            out.flush()
        line = inp.readline()
        if not line:
            break
        buf += line
        if ";" not in line:
            continue
        chunk, buf = buf, ""
        try:
            new = dsl.parse("\n".join(decls + [chunk])).statements
        except dsl.DslError as exc:
            print(f"error: {exc}", file=out)
            continue
        old = len(dsl.parse("\n".join(decls)).statements) if decls else 0
        added = new[old:]
        if any(isinstance(s, dsl.QUERIES) for s in added):
            session = dsl.Session(tuple(s for s in new if not isinstance(s, dsl.QUERIES)
                                        or s in added))
            report = run(session, cfg)
            for e in report["results"]:
                print(_line(e), file=out)
            status = max(status, report["exit_code"])
            decls.append("\n".join(dsl.pp_statement(s) for s in added
                                   if not isinstance(s, dsl.QUERIES)))
        else:
            decls.append(chunk)
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="realtopos",
                                 description="Realizability workbench for nested realizability toposes.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, help="reduction step budget (default 10000)")
    common.add_argument("--depth", type=int, help="realizer search size bound (default 7)")
    common.add_argument("--seed", type=int, help="random seed for suites (default 0)")
    common.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in reports")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("check", "run every query in FILE"), ("suite", "run only the suite queries in FILE")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file", metavar="FILE")
    sub.add_parser("repl", parents=[common], help="interactive session")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("realtopos: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "repl":
        return cmd_repl(args)
    return cmd_run(args, suites_only=args.command == "suite")


if __name__ == "__main__":
    sys.exit(main())
