"""The ideal monitor over explicit tracking sets, its annotation-flag variant,
and a brute-force TINI check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .lang import Agree, Assert, Assign, Assume, If, Seq, Skip, Var, While, seq
from .relform import holds
from .semantics import (
    DEFAULT_FUEL, FAULT, BudgetExhausted, State, _Budget, _split, collecting,
    eval_bool, eval_expr, run, universe,
)

__all__ = [
    "IdealResult", "PolicySpec", "ideal_monitor", "ideal_monitor_alt",
    "lift_union", "tini_holds", "wrap_policy", "check_ideal_tini",
]


@dataclass(frozen=True)
class IdealResult:
    major: State
    tracking: object  # frozenset of State, or FAULT

    @property
    def faulted(self) -> bool:
        return self.tracking is FAULT


@dataclass(frozen=True)
class PolicySpec:
    in_vars: frozenset
    out_vars: frozenset

    def __init__(self, in_vars=(), out_vars=()):
        object.__setattr__(self, "in_vars", frozenset(in_vars))
        object.__setattr__(self, "out_vars", frozenset(out_vars))


def lift_union(S1, S2):
    if S1 is FAULT or S2 is FAULT:
        return FAULT
    return S1 | S2


def _mon(c, s: State, S, allowed: Optional[bool], fuel: int, budget: _Budget):
    """Returns ``(major, tracking)``. ``allowed`` is None for the standard
    monitor and a bool for the flag-carrying variant."""
    if S is FAULT:
        # the major run still advances so that later positions stay defined
        return run(c, s, fuel), FAULT
    match c:
        case Skip():
            return s, S
        case Assign(target, expr):
            return s.set(target, eval_expr(expr, s)), frozenset(
                t.set(target, eval_expr(expr, t)) for t in S)
        case Seq(first, second):
            s1, S1 = _mon(first, s, S, allowed, fuel, budget)
            return _mon(second, s1, S1, allowed, fuel, budget)
        case Assume(formula):
            if allowed is False:
                return s, FAULT
            return s, frozenset(t for t in S if holds(formula, s, t))
        case Assert(formula):
            if allowed is False:
                return s, FAULT
            if all(holds(formula, s, t) for t in S):
                return s, S
            return s, FAULT
        case If(cond, then, orelse):
            yes, no = _split(cond, S)
            if eval_bool(cond, s):
                taken, untaken, mine, other = then, orelse, yes, no
            else:
                taken, untaken, mine, other = orelse, then, no, yes
            flag = allowed
            if allowed is not None:
                flag = allowed and not other
            s1, T1 = _mon(taken, s, mine, flag, fuel, budget)
            T0 = collecting(untaken, other, fuel, allowed=True if flag is None else flag)
            return s1, lift_union(T1, T0)
        case While(cond, body):
            step = If(cond, body, Skip())
            while eval_bool(cond, s):
                budget.tick()
                s, S = _mon(step, s, S, allowed, fuel, budget)
            if S is FAULT:
                return s, FAULT
            return s, collecting(c, S, fuel, allowed=True if allowed is None else allowed)
    raise TypeError(f"not a command: {c!r}")


def ideal_monitor(c, s: State, S, fuel: int = DEFAULT_FUEL) -> IdealResult:
    """Monitor ``c`` from major state ``s`` with tracking set ``S``.

    Raises :class:`BudgetExhausted` if the major run or a collecting fixpoint
    exceeds ``fuel``.
    """
    if S is not FAULT:
        S = frozenset(S)
    major, tracking = _mon(c, s, S, None, fuel, _Budget(fuel))
    return IdealResult(major, tracking)


def ideal_monitor_alt(c, s: State, S, allowed: bool = True,
                      fuel: int = DEFAULT_FUEL) -> IdealResult:
    """Variant in which annotations fault unless ``allowed``; a branch keeps
    the permission only when no tracked state takes the other side."""
    if S is not FAULT:
        S = frozenset(S)
    major, tracking = _mon(c, s, S, bool(allowed), fuel, _Budget(fuel))
    return IdealResult(major, tracking)


def tini_holds(c, policy: PolicySpec, s1: State, domain: Iterable[int],
               fuel: int = DEFAULT_FUEL, variables=None) -> bool:
    """Termination-insensitive noninterference of ``c`` at ``s1``.

    Every state ``s2`` over ``domain`` that agrees with ``s1`` on the input
    variables and terminates must agree with ``s1``'s result on the outputs.
    Raises BudgetExhausted if ``s1`` itself does not terminate.
    """
    s1_out = run(c, s1, fuel)
    names = variables if variables is not None else s1.keys()
    for s2 in universe(names, domain):
        if any(s1[x] != s2[x] for x in policy.in_vars):
            continue
        try:
            s2_out = run(c, s2, fuel)
        except BudgetExhausted:
            continue
        if any(s1_out[x] != s2_out[x] for x in policy.out_vars):
            return False
    return True


def wrap_policy(c, policy: PolicySpec):
    """``assume A in; c; assert A out`` with empty parts left out."""
    parts = []
    if policy.in_vars:
        parts.append(Assume(tuple(Agree(Var(x)) for x in sorted(policy.in_vars))))
    parts.append(c)
    if policy.out_vars:
        parts.append(Assert(tuple(Agree(Var(x)) for x in sorted(policy.out_vars))))
    return seq(*parts)


def check_ideal_tini(c, policy: PolicySpec, s1: State, domain: Iterable[int],
                   fuel: int = DEFAULT_FUEL) -> bool:
    """Ideal monitor on the wrapped program passes iff TINI holds."""
    domain = list(domain)
    U = universe(s1.keys(), domain)
    monitored = ideal_monitor(wrap_policy(c, policy), s1, U, fuel)
    return (not monitored.faulted) == tini_holds(c, policy, s1, domain, fuel)
