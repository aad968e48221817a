import itertools

import pytest
from hypothesis import given, strategies as st

from ifmon.lang import (
    Agree, And, BinOp, Both, BoolVal, CondAgree, Const, Eq, Lt, Not, Var, free_vars,
    parse_bool, parse_formula,
)
from ifmon.oracle import OracleConfig, micro_lattice, run_suite
from ifmon.relform import (
    alpha, entails, fs_join, fs_leq, fs_meet, gamma, holds, is_contradictory,
)
from ifmon.semantics import FAULT, State, eval_expr, universe

from strategies import exprs, formulas

x, y = Var("x"), Var("y")
U2 = sorted(universe(("x", "y"), range(3)), key=repr)


def test_holds_examples():
    s = State(x=1, secret=1)
    assert holds(Agree(x), s, s)
    assert not holds(Both(parse_bool("secret > 0")), State(secret=1), State(secret=0))
    assert holds(Agree(Var("public")), State(public=0, secret=1), State(public=0, secret=2))
    # vacuous conditional agreement
    assert holds(CondAgree(Lt(x, y), x), State(x=0, y=1), State(x=2, y=1))


@given(st.lists(formulas(), min_size=1, max_size=3), st.randoms())
def test_conjunction_order_insensitive(phis, rnd):
    s = State(x=rnd.randint(0, 2), y=rnd.randint(0, 2), z=rnd.randint(0, 2))
    t = State(x=rnd.randint(0, 2), y=rnd.randint(0, 2), z=rnd.randint(0, 2))
    shuffled = list(phis)
    rnd.shuffle(shuffled)
    assert holds(tuple(phis), s, t) == holds(tuple(shuffled), s, t)


def test_alpha_examples():
    L = micro_lattice(0)
    s = State(x=0, y=1)
    assert alpha(s, frozenset(), L) == L
    assert alpha(s, FAULT, L) is FAULT
    S = {State(public=0, secret=v) for v in range(3)}
    got = alpha(State(public=0, secret=1), S, {Agree(Var("public")), Agree(Var("secret"))})
    assert got == {Agree(Var("public"))}


def test_gamma_examples():
    s = State(x=0, y=1)
    assert gamma(s, frozenset(), U2) == frozenset(U2)
    assert gamma(s, FAULT, U2) is FAULT
    b = Lt(x, y)
    assert gamma(s, {Both(b), Both(Not(b))}, U2) == frozenset()


def test_lattice_operations():
    assert fs_join({Agree(x)}, {Agree(y)}) == frozenset()
    assert fs_join({Agree(x)}, FAULT) is FAULT
    assert fs_meet({Agree(x)}, {Both(Lt(x, y))}) == {Agree(x), Both(Lt(x, y))}
    assert fs_meet(FAULT, {Agree(x)}) is FAULT
    assert fs_leq({Agree(x), Agree(y)}, {Agree(x)})
    assert fs_leq(frozenset(), FAULT)
    assert not fs_leq(FAULT, frozenset())


def test_entails_examples():
    b = Lt(x, y)
    assert entails({Agree(x)}, Agree(x))
    assert entails({Both(b), CondAgree(b, Var("e"))}, Agree(Var("e")))
    assert entails({Agree(x), Agree(y)}, Agree(BinOp("+", x, y)))
    assert entails(set(), Agree(Const(4)))
    assert entails({Both(b)}, Agree(BoolVal(b)))
    assert entails({Agree(BoolVal(b))}, Agree(BoolVal(Not(b))))
    assert entails({Agree(y)}, CondAgree(b, y))
    assert entails({Both(Not(b))}, CondAgree(b, x))
    assert entails({Both(And(b, Eq(x, y)))}, Both(b))
    assert not entails({Agree(x)}, Agree(y))
    assert not entails({CondAgree(b, x)}, Agree(x))
    assert entails({Both(b), Both(Not(b))}, Agree(Var("anything")))
    assert entails({Agree(x)}, parse_formula("A x, A x + 1"))


def test_entails_rejects_fault():
    with pytest.raises(ValueError):
        entails(FAULT, Agree(x))


def test_contradiction_detection():
    b = Lt(x, y)
    assert is_contradictory({Both(b), Both(Not(b))})
    assert is_contradictory({Both(And(b, Eq(x, x))), Both(Not(b))})
    assert not is_contradictory({Both(b), Agree(x)})


def _pairs_satisfying(delta):
    return [(s, t) for s, t in itertools.product(U2, repeat=2)
            if all(holds(p, s, t) for p in delta)]


@given(st.lists(formulas(), max_size=3), formulas())
def test_entails_sound_by_enumeration(delta, phi):
    names = {"x", "y", "z"}
    U3 = universe(sorted(names), range(2))
    if entails(set(delta), phi):
        for s in U3:
            for t in U3:
                if all(holds(p, s, t) for p in delta):
                    assert holds(phi, s, t)


def test_galois_suite_micro_domain():
    report = run_suite("galois", OracleConfig(vars=2, lo=0, hi=1))
    assert report.checked > 0
    assert report.counterexamples == []


def test_entailment_suite_micro_domain():
    report = run_suite("entailment", OracleConfig(vars=2, lo=0, hi=1))
    assert report.checked > 0
    assert report.counterexamples == []


@given(st.lists(formulas(), max_size=3), st.sampled_from(["x", "y", "z"]), exprs(3))
def test_assignment_preserves_untouched_formulas(phis, target, e):
    U3 = sorted(universe(("x", "y", "z"), range(2)), key=repr)
    for phi in phis:
        if target in free_vars(phi):
            continue
        for s, t in itertools.product(U3, repeat=2):
            if holds(phi, s, t):
                s2 = s.set(target, eval_expr(e, s))
                t2 = t.set(target, eval_expr(e, t))
                assert holds(phi, s2, t2)


def test_frame_property():
    L = micro_lattice(1) | {Agree(Var("z"))}
    U3 = sorted(universe(("x", "y", "z"), range(2)), key=repr)
    for phi in L:
        fv = free_vars(phi)
        for s, t, t2 in itertools.product(U3, repeat=3):
            if holds(phi, s, t) and all(t[v] == t2[v] for v in fv):
                assert holds(phi, s, t2)
