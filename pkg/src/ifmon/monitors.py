"""Abstract monitors D (purely dynamic), M (modified variables) and I
(interval analysis) over relational formula sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .intervals import BOTTOM, guard_int, interval_exec, top_env
from .lang import (
    Agree, Assert, Assign, Assume, Both, BoolVal, Const, Eq, If, Seq, Skip, Var,
    While, formula_key, free_vars, negate, pretty_bool, pretty_expr, pretty_formula,
)
from .relform import entails, fs_join, is_contradictory, restrict
from .semantics import DEFAULT_FUEL, FAULT, State, _Budget, eval_bool, eval_expr, run

__all__ = [
    "Kind", "MonitorOutcome", "TraceEvent", "mod_vars", "toint", "toform",
    "static_d", "static_m", "static_i", "monitor", "format_formulas",
]


class Kind(enum.Enum):
    D = "d"
    M = "m"
    I = "i"

    @classmethod
    def parse(cls, text) -> "Kind":
        if isinstance(text, Kind):
            return text
        return cls(str(text).lower())


@dataclass(frozen=True)
class TraceEvent:
    kind: str       # assign | assume | assert | skip | branch | merge | loop-exit | static
    text: str
    state: State
    formulas: object  # frozenset or FAULT
    intervals: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "text": self.text,
            "state": self.state.as_dict(),
            "formulas": format_formulas(self.formulas),
        }
        if self.intervals is not None:
            out["intervals"] = self.intervals
        return out


@dataclass
class MonitorOutcome:
    major: State
    formulas: object  # frozenset or FAULT
    trace: list = field(default_factory=list)

    @property
    def faulted(self) -> bool:
        return self.formulas is FAULT

    def first_fault(self) -> Optional[TraceEvent]:
        for ev in self.trace:
            if ev.formulas is FAULT:
                return ev
        return None


def format_formulas(delta):
    if delta is FAULT:
        return "fault"
    return sorted(pretty_formula(phi) for phi in delta)


def mod_vars(c) -> frozenset:
    """Assignment targets anywhere in ``c``."""
    match c:
        case Assign(target, _):
            return frozenset({target})
        case Seq(first, second) | If(_, first, second):
            return mod_vars(first) | mod_vars(second)
        case While(_, body):
            return mod_vars(body)
    return frozenset()


# --- reduced product between intervals and formulas ------------------------

def toint(env, delta, s: State):
    """Refine ``env`` with what ``delta`` says relative to the major state."""
    if delta is FAULT or env is FAULT:
        return env
    for phi in sorted(delta, key=formula_key):
        if env is BOTTOM:
            break
        match phi:
            case Agree(expr):
                env = guard_int(Eq(expr, Const(eval_expr(expr, s))), env)
            case Both(cond):
                env = guard_int(cond, env)
    return env


def toform(env, delta, s: State, lattice=None):
    """Add ``A x`` for every variable pinned by ``env`` to its value in ``s``."""
    if env is FAULT or env is BOTTOM or delta is FAULT:
        return delta
    pinned = {Agree(Var(x)) for x, i in env.items()
              if x in s and i.is_singleton() and i.lo == s[x]}
    return restrict(frozenset(delta) | pinned, lattice)


# --- static parts: what survives in minor runs that took the other path ----
# Each returns FAULT, a formula set, or None for "no minor state left"
# (the bottom of the formula lattice, neutral for the join).

def static_d(c, delta):
    if delta is FAULT:
        return FAULT
    if is_contradictory(delta):
        return None
    return frozenset()


def static_m(c, delta, modified=None):
    if delta is FAULT:
        return FAULT
    if is_contradictory(delta):
        return None
    modified = mod_vars(c) if modified is None else modified
    return frozenset(phi for phi in delta if not (free_vars(phi) & modified))


def static_i(c, delta, s: State, s_after: State, lattice=None, widen_after=3,
             refine=None, observe=None):
    """Interval transfer: pin intervals with ``delta`` at ``s``, optionally
    refine with a guard, analyse ``c``, and read back agreements at
    ``s_after``.  Returns ``(result, entry_env, exit_env)``."""
    if delta is FAULT:
        return FAULT, None, None
    if is_contradictory(delta):
        return None, None, None
    entry = toint(top_env(s.keys()), delta, s)
    if refine is not None:
        entry = guard_int(refine, entry)
    exit_env = interval_exec(c, entry, widen_after, observe)
    if exit_env is BOTTOM:
        return None, entry, exit_env
    return toform(exit_env, frozenset(), s_after, lattice), entry, exit_env


def _join_static(monitored, static):
    if static is None:
        return monitored
    return fs_join(monitored, static)


def _env_json(env):
    if env is BOTTOM:
        return "bottom"
    if env is FAULT:
        return "fault"
    return env.as_dict()


# --- the monitor -----------------------------------------------------------

class _Monitor:
    def __init__(self, kind: Kind, lattice, fuel: int, widen_after: int, trace: bool):
        self.kind = kind
        self.lattice = lattice
        self.fuel = fuel
        self.widen_after = widen_after
        self.trace = [] if trace else None
        self.budget = _Budget(fuel)

    def emit(self, kind, text, s, delta, intervals=None):
        if self.trace is not None:
            self.trace.append(TraceEvent(kind, text, s, delta, intervals))

    def add(self, delta, *phis):
        return delta | restrict(frozenset(phis), self.lattice)

    def exec(self, c, s: State, delta):
        if delta is FAULT:
            return run(c, s, self.fuel), FAULT
        match c:
            case Skip():
                self.emit("skip", "skip", s, delta)
                return s, delta
            case Assign(target, expr):
                s2 = s.set(target, eval_expr(expr, s))
                kept = frozenset(phi for phi in delta if target not in free_vars(phi))
                if entails(delta, Agree(expr)):
                    kept = self.add(kept, Agree(Var(target)))
                self.emit("assign", f"{target} := {pretty_expr(expr)}", s2, kept)
                return s2, kept
            case Seq(first, second):
                s1, d1 = self.exec(first, s, delta)
                return self.exec(second, s1, d1)
            case Assume(formula):
                out = self.add(delta, *formula)
                self.emit("assume", f"assume {pretty_formula(formula)}", s, out)
                return s, out
            case Assert(formula):
                out = self.add(delta, *formula) if entails(delta, formula) else FAULT
                self.emit("assert", f"assert {pretty_formula(formula)}", s, out)
                return s, out
            case If():
                return self.conditional(c, s, delta)
            case While(cond, body):
                step = If(cond, body, Skip())
                while eval_bool(cond, s):
                    self.budget.tick()
                    s, delta = self.exec(step, s, delta)
                return s, self.loop_exit(c, s, delta)
        raise TypeError(f"not a command: {c!r}")

    def conditional(self, c: If, s: State, delta):
        cond = c.cond
        truth = eval_bool(cond, s)
        taken, untaken = (c.then, c.orelse) if truth else (c.orelse, c.then)
        holds_now = cond if truth else negate(cond)
        low = entails(delta, Agree(BoolVal(cond)))
        entry = self.add(delta, Both(holds_now))
        label = "then" if truth else "else"
        self.emit("branch", f"{label} ({'low' if low else 'high'}) {pretty_bool(holds_now)}",
                  s, entry)
        s2, monitored = self.exec(taken, s, entry)
        if low:
            out = monitored
        else:
            out = _join_static(monitored, self.static_branch(untaken, negate(holds_now),
                                                             delta, s, s2, taken))
        self.emit("merge", f"merge if {pretty_bool(cond)}", s2, out)
        return s2, out

    def static_branch(self, untaken, refine, delta, s, s2, taken):
        if self.kind is Kind.D:
            return static_d(untaken, delta)
        if self.kind is Kind.M:
            return static_m(untaken, delta, mod_vars(taken) | mod_vars(untaken))
        steps = []

        def observe(cmd, env):
            steps.append({"after": _atomic_text(cmd), "env": _env_json(env)})

        result, entry, exit_env = static_i(
            untaken, delta, s, s2, self.lattice, self.widen_after, refine=refine,
            observe=observe if self.trace is not None else None)
        self.emit("static", f"untaken branch under {pretty_bool(refine)}", s2,
                  FAULT if result is FAULT else (result if result is not None else frozenset()),
                  {"entry": _env_json(entry), "steps": steps, "exit": _env_json(exit_env)})
        return result

    def loop_exit(self, c: While, s: State, delta):
        if delta is FAULT:
            out = FAULT
        else:
            exit_formula = Both(negate(c.cond))
            if entails(delta, Agree(BoolVal(c.cond))):
                out = self.add(delta, exit_formula)
            elif self.kind is Kind.D:
                out = self.add(frozenset(), exit_formula)
            elif self.kind is Kind.M:
                kept = _join_static(delta, static_m(c, delta))
                out = self.add(kept, exit_formula)
            else:
                static, entry, exit_env = static_i(c, delta, s, s, self.lattice, self.widen_after)
                kept = _join_static(delta, static)
                out = self.add(kept, exit_formula)
                self.emit("static", f"loop {pretty_bool(c.cond)}", s, kept,
                          {"entry": _env_json(entry), "steps": [], "exit": _env_json(exit_env)})
        self.emit("loop-exit", f"exit while {pretty_bool(c.cond)}", s, out)
        return out


def _atomic_text(c) -> str:
    match c:
        case Assign(target, expr):
            return f"{target} := {pretty_expr(expr)}"
        case Assume(formula):
            return f"assume {pretty_formula(formula)}"
        case Assert(formula):
            return f"assert {pretty_formula(formula)}"
    return "skip"


def monitor(kind, c, s: State, delta=frozenset(), lattice=None,
            fuel: int = DEFAULT_FUEL, widen_after: int = 3,
            trace: bool = True) -> MonitorOutcome:
    """Run monitor ``kind`` on ``c`` from major state ``s`` and formulas ``delta``.

    ``lattice`` bounds the formulas the monitor may add (``None`` means no
    bound).  Raises BudgetExhausted when the major run exceeds ``fuel``.
    """
    m = _Monitor(Kind.parse(kind), lattice, fuel, widen_after, trace)
    if delta is not FAULT:
        delta = frozenset(delta)
    major, formulas = m.exec(c, s, delta)
    return MonitorOutcome(major, formulas, m.trace or [])
