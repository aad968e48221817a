"""Relational formulas: semantics, the formula-set lattice, (alpha, gamma), and
a sound approximate entailment."""

from __future__ import annotations

from typing import Iterable

from .lang import Agree, And, BinOp, Both, BoolVal, CondAgree, Const, Eq, Lt, Not, Var, negate
from .semantics import FAULT, eval_bool, eval_expr

__all__ = [
    "holds", "holds_all", "alpha", "gamma", "fs_join", "fs_meet", "fs_leq",
    "entails", "is_contradictory", "restrict",
]


def holds(phi, s, t) -> bool:
    """``s | t |= phi`` for a basic formula or a tuple of them."""
    match phi:
        case Agree(expr):
            return eval_expr(expr, s) == eval_expr(expr, t)
        case Both(cond):
            return eval_bool(cond, s) and eval_bool(cond, t)
        case CondAgree(cond, expr):
            if eval_bool(cond, s) and eval_bool(cond, t):
                return eval_expr(expr, s) == eval_expr(expr, t)
            return True
        case tuple() | list() | frozenset() | set():
            return all(holds(p, s, t) for p in phi)
    raise TypeError(f"not a formula: {phi!r}")


def holds_all(delta, s, states) -> bool:
    """Every formula of ``delta`` relates ``s`` to every state in ``states``."""
    return all(holds(phi, s, t) for t in states for phi in delta)


def alpha(s, S, lattice: Iterable):
    if S is FAULT:
        return FAULT
    S = list(S)
    return frozenset(phi for phi in lattice if all(holds(phi, s, t) for t in S))


def gamma(s, delta, universe):
    if delta is FAULT:
        return FAULT
    return frozenset(t for t in universe if all(holds(phi, s, t) for phi in delta))


def fs_join(d1, d2):
    if d1 is FAULT or d2 is FAULT:
        return FAULT
    return frozenset(d1) & frozenset(d2)


def fs_meet(d1, d2):
    # never requested with FAULT by the monitors; answering FAULT is safe
    if d1 is FAULT or d2 is FAULT:
        return FAULT
    return frozenset(d1) | frozenset(d2)


def fs_leq(d1, d2) -> bool:
    if d2 is FAULT:
        return True
    if d1 is FAULT:
        return False
    return frozenset(d1) >= frozenset(d2)


def restrict(delta, lattice):
    """Drop formulas outside ``lattice`` (dropping is always sound)."""
    if delta is FAULT or lattice is None:
        return delta
    return frozenset(phi for phi in delta if phi in lattice)


def _both_set(delta) -> set:
    out = set()
    stack = [phi.cond for phi in delta if isinstance(phi, Both)]
    while stack:
        b = stack.pop()
        if b in out:
            continue
        out.add(b)
        if isinstance(b, And):
            stack += [b.left, b.right]
        if isinstance(b, Not) and isinstance(b.arg, Not):
            stack.append(b.arg.arg)
    return out


def is_contradictory(delta) -> bool:
    """True when ``delta`` demands both ``B b`` and ``B !b`` for some ``b``;
    such a set relates ``s`` to no state at all."""
    if delta is FAULT:
        return False
    bs = _both_set(delta)
    return any(negate(b) in bs for b in bs)


class _Closure:
    def __init__(self, delta):
        self.delta = frozenset(delta)
        self.both = _both_set(self.delta)
        agreed = {phi.expr for phi in self.delta if isinstance(phi, Agree)}
        # B b together with B b => A e yields A e
        for phi in self.delta:
            if isinstance(phi, CondAgree) and self.holds_both(phi.cond):
                agreed.add(phi.expr)
        self.agreed = agreed

    def holds_both(self, b) -> bool:
        if b in self.both:
            return True
        if isinstance(b, And):
            return self.holds_both(b.left) and self.holds_both(b.right)
        return False

    def agrees(self, e) -> bool:
        if e in self.agreed:
            return True
        match e:
            case Const():
                return True
            case Var():
                return False
            case BinOp(_, left, right):
                return self.agrees(left) and self.agrees(right)
            case BoolVal(cond):
                return self.agrees_bool(cond)
        return False

    def agrees_bool(self, b) -> bool:
        # B b or B !b: both sides evaluate b identically
        if self.holds_both(b) or self.holds_both(negate(b)):
            return True
        if BoolVal(b) in self.agreed or BoolVal(negate(b)) in self.agreed:
            return True
        match b:
            case Lt(left, right) | Eq(left, right):
                return self.agrees(left) and self.agrees(right)
            case Not(arg):
                return self.agrees_bool(arg)
            case And(left, right):
                return self.agrees_bool(left) and self.agrees_bool(right)
        return False

    def entails(self, phi) -> bool:
        if phi in self.delta:
            return True
        match phi:
            case Agree(expr):
                return self.agrees(expr)
            case Both(cond):
                return self.holds_both(cond)
            case CondAgree(cond, expr):
                return self.agrees(expr) or self.holds_both(negate(cond))
        raise TypeError(f"not a basic formula: {phi!r}")


def entails(delta, phi) -> bool:
    """Sound, incomplete ``delta =># phi``.

    ``phi`` may be a basic formula or a tuple read conjunctively.
    """
    if delta is FAULT:
        raise ValueError("entailment is undefined for FAULT")
    if is_contradictory(delta):
        return True
    closure = _Closure(delta)
    if isinstance(phi, (tuple, list)):
        return all(closure.entails(p) for p in phi)
    return closure.entails(phi)
