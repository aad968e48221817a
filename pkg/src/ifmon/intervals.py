"""Interval domain and the abstract interval semantics of commands."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .lang import (
    And, Assert, Assign, Assume, BinOp, BoolVal, Const, Eq, If, Lt, Not, Seq,
    Skip, Var, While,
)
from .semantics import FAULT

__all__ = [
    "Interval", "EMPTY", "TOP", "BOTTOM", "Env", "ivl_arith", "eval_interval",
    "app", "guard_int", "interval_exec", "contains", "top_env", "env_join",
    "env_meet", "env_leq", "env_widen", "singleton",
]

INF = math.inf


def _mul(a, b):
    # 0 * inf = 0: a zero bound kills the infinity
    if a == 0 or b == 0:
        return 0
    return a * b


def _norm(v):
    return v if isinstance(v, int) or math.isinf(v) else int(v)


@dataclass(frozen=True)
class Interval:
    lo: object  # int or -inf
    hi: object  # int or +inf

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    def is_singleton(self) -> bool:
        return self.lo == self.hi and not math.isinf(self.lo)

    def join(self, other: "Interval") -> "Interval":
        if self.empty:
            return other
        if other.empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else EMPTY

    def leq(self, other: "Interval") -> bool:
        return self.empty or (other.lo <= self.lo and self.hi <= other.hi)

    def widen(self, other: "Interval") -> "Interval":
        if self.empty:
            return other
        if other.empty:
            return self
        lo = self.lo if other.lo >= self.lo else -INF
        hi = self.hi if other.hi <= self.hi else INF
        return Interval(lo, hi)

    def __str__(self):
        if self.empty:
            return "empty"
        lo = "-inf" if self.lo == -INF else str(self.lo)
        hi = "+inf" if self.hi == INF else str(self.hi)
        return f"[{lo}, {hi}]"


EMPTY = Interval(INF, -INF)
TOP = Interval(-INF, INF)


def singleton(n: int) -> Interval:
    return Interval(n, n)


def ivl_arith(op: str, a: Interval, b: Interval) -> Interval:
    if a.empty or b.empty:
        return EMPTY
    if op == "+":
        return Interval(a.lo + b.lo, a.hi + b.hi)
    if op == "-":
        return Interval(a.lo - b.hi, a.hi - b.lo)
    if op == "*":
        products = [_mul(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
        return Interval(min(products), max(products))
    raise ValueError(f"unknown operator {op!r}")


def _blw(i: Interval) -> Interval:
    return Interval(-INF, i.hi)


def _abv(i: Interval) -> Interval:
    return Interval(i.lo, INF)


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


class Env(Mapping):
    """Total map from variables to non-empty intervals.

    Variables outside the map read as ``TOP``.  Build through :meth:`make`,
    which turns any empty component into ``BOTTOM``.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, items: Mapping):
        self._d = dict(items)
        self._hash = None

    @staticmethod
    def make(items: Mapping):
        if any(i.empty for i in items.values()):
            return BOTTOM
        return Env(items)

    def __getitem__(self, key):
        return self._d.get(key, TOP)

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, Env):
            names = set(self._d) | set(other._d)
            return all(self[x] == other[x] for x in names)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((k, v) for k, v in self._d.items() if v != TOP))
        return self._hash

    def __repr__(self):
        return "Env(" + ", ".join(f"{k}={v}" for k, v in sorted(self._d.items())) + ")"

    def set(self, name: str, value: Interval):
        if value.empty:
            return BOTTOM
        d = dict(self._d)
        d[name] = value
        return Env(d)

    def as_dict(self) -> dict:
        return {k: str(v) for k, v in sorted(self._d.items())}


def top_env(variables: Iterable[str]) -> Env:
    return Env({x: TOP for x in variables})


def env_join(a, b):
    if a is FAULT or b is FAULT:
        return FAULT
    if a is BOTTOM:
        return b
    if b is BOTTOM:
        return a
    names = set(a) | set(b)
    return Env({x: a[x].join(b[x]) for x in names})


def env_meet(a, b):
    if a is FAULT:
        return b
    if b is FAULT:
        return a
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    names = set(a) | set(b)
    return Env.make({x: a[x].meet(b[x]) for x in names})


def env_leq(a, b) -> bool:
    if b is FAULT:
        return True
    if a is FAULT:
        return False
    if a is BOTTOM:
        return True
    if b is BOTTOM:
        return False
    names = set(a) | set(b)
    return all(a[x].leq(b[x]) for x in names)


def env_widen(a, b):
    if a is FAULT or b is FAULT:
        return FAULT
    if a is BOTTOM:
        return b
    if b is BOTTOM:
        return a
    names = set(a) | set(b)
    return Env({x: a[x].widen(b[x]) for x in names})


def contains(env, s: Mapping) -> bool:
    """Membership of a concrete state in the concretisation of ``env``."""
    if env is FAULT:
        return True
    if env is BOTTOM:
        return False
    return all(s[x] in env[x] for x in env if x in s)


def eval_interval(e, env: Env) -> Interval:
    match e:
        case Const(value):
            return singleton(value)
        case Var(name):
            return env[name]
        case BinOp(op, left, right):
            return ivl_arith(op, eval_interval(left, env), eval_interval(right, env))
        case BoolVal(cond):
            can_true = guard_int(cond, env) is not BOTTOM
            can_false = guard_int(Not(cond), env) is not BOTTOM
            if can_true and not can_false:
                return singleton(1)
            if can_false and not can_true:
                return singleton(0)
            return Interval(0, 1)
    raise TypeError(f"not an expression: {e!r}")


def app(e, i: Interval, env):
    """Refine ``env`` under the constraint that ``e`` evaluates into ``i``."""
    if env is BOTTOM or env is FAULT:
        return env
    if i.empty:
        return BOTTOM
    match e:
        case Var(name):
            return env.set(name, env[name].meet(i))
        case Const(value):
            return env if value in i else BOTTOM
        case BinOp("+", left, right):
            return env_meet(
                app(left, ivl_arith("-", i, eval_interval(right, env)), env),
                app(right, ivl_arith("-", i, eval_interval(left, env)), env))
        case BinOp("-", left, right):
            return env_meet(
                app(left, ivl_arith("+", i, eval_interval(right, env)), env),
                app(right, ivl_arith("-", eval_interval(left, env), i), env))
        case BoolVal(cond):
            want_true, want_false = 1 in i, 0 in i
            if want_true and want_false:
                return env
            if want_true:
                return guard_int(cond, env)
            if want_false:
                return guard_int(Not(cond), env)
            return BOTTOM
    # products: only the emptiness check
    if eval_interval(e, env).meet(i).empty:
        return BOTTOM
    return env


def _guard(b, env, positive: bool):
    if env is BOTTOM:
        return BOTTOM
    match b:
        case Not(arg):
            return _guard(arg, env, not positive)
        case And(left, right):
            if positive:
                return _guard(right, _guard(left, env, True), True)
            return env_join(_guard(left, env, False), _guard(right, env, False))
        case Lt(left, right):
            if not positive:
                # left >= right
                return env_meet(
                    app(right, _blw(eval_interval(left, env)), env),
                    app(left, _abv(eval_interval(right, env)), env))
            one = singleton(1)
            return env_meet(
                app(left, _blw(ivl_arith("-", eval_interval(right, env), one)), env),
                app(right, _abv(ivl_arith("+", eval_interval(left, env), one)), env))
        case Eq(left, right):
            if not positive:
                return env_join(_guard(Lt(left, right), env, True),
                                _guard(Lt(right, left), env, True))
            return env_meet(
                app(left, eval_interval(right, env), env),
                app(right, eval_interval(left, env), env))
    raise TypeError(f"not a boolean expression: {b!r}")


def guard_int(b, env):
    """Interval refinement assuming ``b`` holds."""
    if env is FAULT:
        return FAULT
    return _guard(b, env, True)


Observer = Optional[Callable[[object, object], None]]


def _exec(c, env, widen_after: int, observe: Observer):
    if env is FAULT or env is BOTTOM:
        return env
    match c:
        case Skip() | Assume() | Assert():
            out = env
        case Assign(target, expr):
            out = env.set(target, eval_interval(expr, env))
        case Seq(first, second):
            return _exec(second, _exec(first, env, widen_after, observe), widen_after, observe)
        case If(cond, then, orelse):
            return env_join(
                _exec(then, guard_int(cond, env), widen_after, observe),
                _exec(orelse, guard_int(Not(cond), env), widen_after, observe))
        case While(cond, body):
            return _loop(cond, body, env, widen_after)
        case _:
            raise TypeError(f"not a command: {c!r}")
    if observe is not None:
        observe(c, out)
    return out


def _loop(cond, body, init, widen_after: int):
    def step(x):
        return env_join(init, _exec(body, guard_int(cond, x), widen_after, None))

    x = init
    count = 0
    while True:
        nxt = step(x)
        if env_leq(nxt, x):
            break
        count += 1
        x = env_widen(x, nxt) if count > widen_after else env_join(x, nxt)
    # one narrowing pass: x is a post-fixpoint, so step(x) is one too
    x = step(x)
    return guard_int(Not(cond), x)


def interval_exec(c, env, widen_after: int = 3, observe: Observer = None):
    """Abstract execution of ``c`` on intervals.

    Loops accumulate joins and switch to widening after ``widen_after``
    ascending steps, then take one narrowing step.  ``observe(cmd, env)``
    is called after each atomic command outside loops.
    """
    if widen_after < 0:
        raise ValueError("widen_after must be nonnegative")
    return _exec(c, env, widen_after, observe)
