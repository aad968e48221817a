"""Standard (fuel-bounded) and collecting semantics of the while-language."""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from typing import Iterable

from .lang import (
    And, Assert, Assign, Assume, BinOp, BoolVal, Const, Eq, If, Lt, Not, Seq,
    Skip, Var, While,
)

__all__ = [
    "State", "FAULT", "BudgetExhausted", "DEFAULT_FUEL", "VALUE_LIMIT", "eval_expr", "eval_bool",
    "run", "guard", "collecting", "universe", "has_annotations", "is_fault",
]

DEFAULT_FUEL = 10_000
# products beyond this magnitude count as running out of budget; repeated
# squaring would otherwise stall a run long before the step budget does
VALUE_LIMIT = 2 ** 256


class _Fault:
    """The top element shared by every lattice in the package."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FAULT"

    def __reduce__(self):
        return (_Fault, ())


FAULT = _Fault()


def is_fault(x) -> bool:
    return x is FAULT


class BudgetExhausted(Exception):
    """A loop (or loop fixpoint) did not settle within the step budget."""


class State(Mapping):
    """Immutable, hashable map from variable names to integers."""

    __slots__ = ("_d", "_hash")

    def __init__(self, values=None, **kw):
        d = dict(values or {})
        d.update(kw)
        self._d = d
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, State):
            return self._d == other._d
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self._d.items()))
        return f"State({inner})"

    def __reduce__(self):
        return (State, (self._d,))

    def set(self, name: str, value: int) -> "State":
        d = dict(self._d)
        d[name] = value
        return State(d)

    def as_dict(self) -> dict:
        return dict(sorted(self._d.items()))


class _Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExhausted()


def eval_expr(e, s: Mapping) -> int:
    match e:
        case Const(value):
            return value
        case Var(name):
            return s[name]
        case BinOp(op, left, right):
            a = eval_expr(left, s)
            b = eval_expr(right, s)
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            v = a * b
            if -VALUE_LIMIT <= v <= VALUE_LIMIT:
                return v
            raise BudgetExhausted("value out of range")
        case BoolVal(cond):
            return 1 if eval_bool(cond, s) else 0
    raise TypeError(f"not an expression: {e!r}")


def eval_bool(b, s: Mapping) -> bool:
    match b:
        case Lt(left, right):
            return eval_expr(left, s) < eval_expr(right, s)
        case Eq(left, right):
            return eval_expr(left, s) == eval_expr(right, s)
        case Not(arg):
            return not eval_bool(arg, s)
        case And(left, right):
            return eval_bool(left, s) and eval_bool(right, s)
    raise TypeError(f"not a boolean expression: {b!r}")


def _run(c, s: State, budget: _Budget) -> State:
    match c:
        case Skip() | Assume() | Assert():
            return s
        case Assign(target, expr):
            return s.set(target, eval_expr(expr, s))
        case Seq(first, second):
            return _run(second, _run(first, s, budget), budget)
        case If(cond, then, orelse):
            return _run(then if eval_bool(cond, s) else orelse, s, budget)
        case While(cond, body):
            while eval_bool(cond, s):
                budget.tick()
                s = _run(body, s, budget)
            return s
    raise TypeError(f"not a command: {c!r}")


def run(c, s: State, fuel: int = DEFAULT_FUEL) -> State:
    """Final state of ``c`` from ``s``; raises :class:`BudgetExhausted` after
    ``fuel`` loop iterations."""
    return _run(c, s, _Budget(fuel))


def guard(b, S):
    if S is FAULT:
        return FAULT
    return frozenset(t for t in S if eval_bool(b, t))


def has_annotations(c) -> bool:
    match c:
        case Assume() | Assert():
            return True
        case Seq(first, second) | If(_, first, second):
            return has_annotations(first) or has_annotations(second)
        case While(_, body):
            return has_annotations(body)
    return False


def _collect(c, S: frozenset, budget: _Budget) -> frozenset:
    match c:
        case Skip() | Assume() | Assert():
            return S
        case Assign(target, expr):
            return frozenset(t.set(target, eval_expr(expr, t)) for t in S)
        case Seq(first, second):
            return _collect(second, _collect(first, S, budget), budget)
        case If(cond, then, orelse):
            yes, no = _split(cond, S)
            return _collect(then, yes, budget) | _collect(orelse, no, budget)
        case While(cond, body):
            # accumulate from the empty set; only new states are pushed through
            seen = set(S)
            frontier = S
            while frontier:
                budget.tick()
                inside = frozenset(t for t in frontier if eval_bool(cond, t))
                step = _collect(body, inside, budget)
                frontier = frozenset(t for t in step if t not in seen)
                seen |= frontier
            return frozenset(t for t in seen if not eval_bool(cond, t))
    raise TypeError(f"not a command: {c!r}")


def _split(cond, S):
    yes, no = [], []
    for t in S:
        (yes if eval_bool(cond, t) else no).append(t)
    return frozenset(yes), frozenset(no)


def collecting(c, S, fuel: int = DEFAULT_FUEL, allowed: bool = True):
    """Collecting semantics on an explicit state set.

    With ``allowed=False`` this is the variant in which reaching any
    annotation command yields FAULT; since every sub-command is evaluated
    (even on the empty set) that happens exactly when ``c`` contains one.
    """
    if S is FAULT:
        return FAULT
    if not allowed and has_annotations(c):
        return FAULT
    return _collect(c, frozenset(S), _Budget(fuel))


def universe(variables: Iterable[str], domain: Iterable[int]) -> frozenset:
    """Every state over ``variables`` taking values in ``domain``."""
    names = sorted(set(variables))
    values = list(domain)
    return frozenset(
        State(dict(zip(names, combo)))
        for combo in itertools.product(values, repeat=len(names))
    )
