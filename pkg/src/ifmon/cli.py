"""Command-line front end.

Exit codes: 0 pass, 1 fault (or oracle counterexamples), 2 budget
exhausted, 3 usage, file, parse or state errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .ideal import ideal_monitor
from .lang import ParseError, collect_lattice, parse_formula, parse_program, program_vars
from .monitors import Kind, format_formulas, monitor
from .oracle import SUITES, OracleConfig, config_json, run_suite
from .semantics import DEFAULT_FUEL, FAULT, BudgetExhausted, State, universe

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAULT, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_state_text(text: str) -> dict:
    """``k=v`` pairs separated by commas or newlines; ``#`` starts a comment."""
    values = {}
    for raw in text.replace(",", "\n").splitlines():
        item = raw.split("#", 1)[0].strip()
        if not item:
            continue
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name.isidentifier():
            raise UsageError(f"bad state entry {item!r}; expected name=value")
        try:
            values[name] = int(value.strip())
        except ValueError:
            raise UsageError(f"value of {name!r} is not an integer: {value.strip()!r}") from None
    return values


def _load_program(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read program {path}: {exc.strerror}") from None
    try:
        return parse_program(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _initial_state(c, args) -> State:
    given = {}
    if getattr(args, "state_file", None):
        try:
            given.update(parse_state_text(Path(args.state_file).read_text(encoding="utf-8")))
        except OSError as exc:
            raise UsageError(f"cannot read state file {args.state_file}: {exc.strerror}") from None
    if getattr(args, "state", None):
        given.update(parse_state_text(args.state))
    names = program_vars(c)
    unknown = sorted(set(given) - names)
    if unknown:
        print(f"warning: state binds variables not in the program: {', '.join(unknown)}",
              file=sys.stderr)
    # unlisted program variables start at 0
    return State({x: given.get(x, 0) for x in sorted(names | set(given))})


def _initial_delta(args):
    if not getattr(args, "delta", None):
        return frozenset()
    try:
        return frozenset(parse_formula(args.delta))
    except ParseError as exc:
        raise UsageError(f"--delta: {exc}") from None


def _check_positive(args):
    if args.fuel < 1:
        raise UsageError("--fuel must be at least 1")
    if getattr(args, "widen_after", 1) < 1:
        raise UsageError("--widen-after must be at least 1")


def _emit(payload: dict, started: float, args):
    if getattr(args, "timing", False):
        payload["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _run_one(kind: Kind, c, s, delta, args, trace: bool) -> dict:
    lattice = collect_lattice(c) | delta
    try:
        out = monitor(kind, c, s, delta, lattice, args.fuel, args.widen_after, trace=True)
    except BudgetExhausted:
        return {"monitor": kind.value, "verdict": "budget-exhausted", "final_state": None,
                "formulas": None}
    report = {
        "monitor": kind.value,
        "verdict": "fault" if out.faulted else "pass",
        "final_state": out.major.as_dict(),
        "formulas": format_formulas(out.formulas),
    }
    first = out.first_fault()
    if first is not None:
        report["fault_at"] = first.text
    if trace:
        report["trace"] = [ev.to_json() for ev in out.trace]
    return report


def _verdict_code(verdict: str) -> int:
    return {"pass": EXIT_PASS, "fault": EXIT_FAULT, "budget-exhausted": EXIT_BUDGET}[verdict]


def cmd_run(args) -> int:
    started = time.perf_counter()
    _check_positive(args)
    c = _load_program(args.program)
    s = _initial_state(c, args)
    delta = _initial_delta(args)
    report = _run_one(Kind.parse(args.monitor), c, s, delta, args, trace=args.trace)
    payload = {"schema_version": SCHEMA_VERSION, "command": "run", "program": args.program,
               "initial_state": s.as_dict(), **report}
    _emit(payload, started, args)
    return _verdict_code(report["verdict"])


def _table(rows: dict) -> str:
    lines = [f"{'monitor':<8} {'verdict':<17} formulas"]
    for kind, rep in rows.items():
        formulas = rep["formulas"]
        shown = formulas if isinstance(formulas, str) else "{" + ", ".join(formulas or []) + "}"
        lines.append(f"{kind:<8} {rep['verdict']:<17} {shown}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    started = time.perf_counter()
    _check_positive(args)
    c = _load_program(args.program)
    s = _initial_state(c, args)
    delta = _initial_delta(args)
    rows = {k.value: _run_one(k, c, s, delta, args, trace=False) for k in Kind}
    payload = {"schema_version": SCHEMA_VERSION, "command": "compare", "program": args.program,
               "initial_state": s.as_dict(), "monitors": rows}
    if args.table:
        print(_table(rows))
    else:
        _emit(payload, started, args)
    verdicts = {r["verdict"] for r in rows.values()}
    if "budget-exhausted" in verdicts:
        return EXIT_BUDGET
    return EXIT_FAULT if "fault" in verdicts else EXIT_PASS


def _parse_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected LO..HI") from None


def cmd_ideal(args) -> int:
    """Replay the ideal monitor on the whole universe over a value range."""
    started = time.perf_counter()
    _check_positive(args)
    c = _load_program(args.program)
    s = _initial_state(c, args)
    lo, hi = _parse_range(args.range)
    if (hi - lo + 1) ** len(s) > 100_000:
        raise UsageError("universe too large to enumerate; shrink --range")
    U = universe(s.keys(), range(lo, hi + 1))
    try:
        res = ideal_monitor(c, s, U, args.fuel)
    except BudgetExhausted:
        payload = {"schema_version": SCHEMA_VERSION, "command": "ideal", "program": args.program,
                   "verdict": "budget-exhausted"}
        _emit(payload, started, args)
        return EXIT_BUDGET
    payload = {
        "schema_version": SCHEMA_VERSION, "command": "ideal", "program": args.program,
        "initial_state": s.as_dict(), "range": [lo, hi],
        "verdict": "fault" if res.faulted else "pass",
        "final_state": res.major.as_dict(),
        "tracking_size": None if res.tracking is FAULT else len(res.tracking),
    }
    _emit(payload, started, args)
    return EXIT_FAULT if res.faulted else EXIT_PASS


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    lo, hi = _parse_range(args.range)
    try:
        cfg = OracleConfig(vars=args.vars, lo=lo, hi=hi, depth=args.depth,
                           samples=args.samples, seed=args.seed, fuel=args.fuel,
                           widen_after=args.widen_after)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(name, cfg, workers=args.workers).to_json() for name in names]
    payload = {"schema_version": SCHEMA_VERSION, "command": "oracle", "config": config_json(cfg),
               "suites": reports,
               "passed": all(r["passed"] for r in reports)}
    _emit(payload, started, args)
    return EXIT_PASS if payload["passed"] else EXIT_FAULT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ifmon", description="Information-flow monitors over an annotated while-language.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def program_args(sp):
        sp.add_argument("--program", required=True, help="program file (.ifm)")
        sp.add_argument("--state", help="initial state as k=v,...; unlisted variables are 0")
        sp.add_argument("--state-file", help="file of name=value lines")
        sp.add_argument("--delta", help="initial formulas, e.g. 'A x, B x < y'")
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="loop-iteration budget")
        sp.add_argument("--widen-after", type=int, default=3,
                        help="interval loop iterations before widening")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timing")

    r = sub.add_parser("run", help="run one monitor")
    program_args(r)
    r.add_argument("--monitor", choices=["d", "m", "i"], default="d")
    r.add_argument("--trace", action="store_true", help="include the per-step trace")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="run D, M and I side by side")
    program_args(c)
    c.add_argument("--table", action="store_true", help="print a text table instead of JSON")
    c.set_defaults(func=cmd_compare)

    i = sub.add_parser("ideal", help="ideal monitor over every state in a value range")
    program_args(i)
    i.add_argument("--range", default="0..2", help="value range LO..HI")
    i.set_defaults(func=cmd_ideal)

    o = sub.add_parser("oracle", help="brute-force property suites")
    o.add_argument("--suite", choices=list(SUITES) + ["all"], required=True)
    o.add_argument("--vars", type=int, default=3)
    o.add_argument("--range", default="0..2")
    o.add_argument("--depth", type=int, default=4)
    o.add_argument("--samples", type=int, default=500)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--fuel", type=int, default=2_000)
    o.add_argument("--widen-after", type=int, default=3)
    o.add_argument("--workers", type=int, default=1, help="worker processes")
    o.add_argument("--timing", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ifmon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
