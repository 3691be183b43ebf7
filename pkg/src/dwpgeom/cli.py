"""Command line entry point: ``dwpgeom <subcommand> SCENARIO [options]``.

Exit codes: 0 when every check passes, 1 on any violated inequality or
identity, 2 on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import DEFAULT
from .errors import GeometryError
from .report import build_document, to_csv, to_json
from .scenario import bundled_names, parse_scenario, run_scenario

SUBCOMMANDS = {
    "check-curvature": ("curvature",),
    "verify-proposition": ("proposition",),
    "verify-theorem": ("theorem",),
    "chen-lemma": ("chen",),
    "obstruction": ("obstruction",),
    "presets": ("preset-audit",),
}
DEFAULT_SCENARIO = {
    "check-curvature": "sphere_curvature",
    "verify-proposition": "sphere",
    "verify-theorem": "legendrian",
    "chen-lemma": "chen",
    "obstruction": "obstruction",
    "presets": "presets",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="override the scenario's sampling seed")
    p.add_argument("--samples", type=int, default=None, help="override the number of random samples")
    p.add_argument("--tolerance", type=float, default=None, help="equality tolerance (default 1e-8)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dwpgeom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("scenario", nargs="?", default=DEFAULT_SCENARIO[name],
                       help="scenario file or bundled fixture name")
        _common(p)
    p = sub.add_parser("selftest", help="run every bundled fixture and compare with its expected exit code")
    _common(p)
    return parser


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_one(name: str, kinds, args):
    s = parse_scenario(name)
    if kinds and s.kind not in kinds:
        raise GeometryError(f"scenario {name!r} has kind {s.kind!r}; this subcommand expects {kinds[0]!r}")
    if args.tolerance is not None:
        s.tolerances = dataclasses.replace(s.tolerances, equality=args.tolerance)
    result = run_scenario(s, seed=args.seed, count=args.samples)
    doc = build_document(s, result, s.tolerances, args.seed, args.samples)
    return s, result, doc


def _selftest(args) -> int:
    lines, records, failed = [], [], 0
    for name in bundled_names():
        try:
            s, result, _ = run_one(name, None, args)
            got, want = result.exit_code, int(s.expect.get("exit_code", 0))
        except GeometryError as exc:
            got, want = 2, 2
            s = None
            lines.append(f"  input error in {name}: {exc}")
        ok = got == want
        failed += not ok
        records.append({"fixture": name, "exit_code": got, "expected_exit_code": want, "passed": ok})
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} (exit {got}, expected {want})")
    summary = {"fixtures": len(records), "failed": failed, "passed": failed == 0}
    if args.format == "csv":
        text = to_csv(records)
    else:
        text = to_json({"report_version": 1, "metadata": {"tool": "dwpgeom", "kind": "selftest",
                        "tolerances": DEFAULT.to_dict()}, "records": records, "summary": summary})
    _emit(text, args.output)
    for line in lines:
        print(line, file=sys.stderr)
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "selftest":
        return _selftest(args)
    try:
        _, result, doc = run_one(args.scenario, SUBCOMMANDS[args.command], args)
    except (GeometryError, OSError) as exc:
        print(f"dwpgeom: error: {exc}", file=sys.stderr)
        return 2
    _emit(to_csv(doc["records"]) if args.format == "csv" else to_json(doc), args.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
