import math

import pytest
from hypothesis import assume, given, strategies as st

from ifmon.intervals import (
    BOTTOM, EMPTY, TOP, Env, Interval, app, contains, env_join, env_leq, env_meet,
    eval_interval, guard_int, interval_exec, ivl_arith, singleton, top_env,
)
from ifmon.lang import parse_bool, parse_expr, parse_program
from ifmon.oracle import OracleConfig, run_suite
from ifmon.semantics import BudgetExhausted, State, eval_bool, eval_expr, run

from strategies import bools, commands, exprs, states

INF = math.inf


def I(lo, hi):
    return Interval(lo, hi)


def env(**kw):
    return Env({k: I(*v) for k, v in kw.items()})


def test_interval_basics():
    assert EMPTY.empty and not TOP.empty
    assert 3 in I(0, 5) and 6 not in I(0, 5)
    assert I(0, 2).join(I(5, 6)) == I(0, 6)
    assert I(0, 2).meet(I(3, 4)).empty
    assert I(1, 2).leq(I(0, 5)) and EMPTY.leq(I(0, 0))
    assert I(0, 2).widen(I(0, 3)) == I(0, INF)
    assert I(0, 2).widen(I(-1, 2)) == I(-INF, 2)
    assert str(singleton(3)) == "[3, 3]"
    assert str(TOP) == "[-inf, +inf]"
    assert str(EMPTY) == "empty"


def test_arithmetic_examples():
    assert ivl_arith("-", I(0, 5), I(2, 3)) == I(-3, 3)
    assert ivl_arith("+", I(0, 5), I(2, 3)) == I(2, 8)
    assert ivl_arith("*", I(-2, 3), I(4, 5)) == I(-10, 15)
    assert ivl_arith("*", I(0, 0), TOP) == I(0, 0)
    assert ivl_arith("*", I(1, INF), I(-1, 1)) == TOP
    assert ivl_arith("+", EMPTY, I(0, 1)).empty


bounds = st.integers(-4, 4)


@st.composite
def small_intervals(draw):
    a, b = sorted((draw(bounds), draw(bounds)))
    return I(a, b)


@given(st.sampled_from("+-*"), small_intervals(), small_intervals())
def test_arithmetic_exact_on_small_intervals(op, a, b):
    f = {"+": lambda x, y: x + y, "-": lambda x, y: x - y, "*": lambda x, y: x * y}[op]
    values = [f(x, y) for x in range(a.lo, a.hi + 1) for y in range(b.lo, b.hi + 1)]
    assert ivl_arith(op, a, b) == I(min(values), max(values))


def test_app_examples():
    e = env(x=(0, 5), y=(0, 5))
    got = app(parse_expr("x + y"), singleton(10), e)
    assert got["x"] == singleton(5) and got["y"] == singleton(5)
    assert app(parse_expr("3"), I(0, 2), e) is BOTTOM
    assert app(parse_expr("3"), I(0, 4), e) == e
    assert app(parse_expr("x - y"), I(5, 5), e) == env(x=(5, 5), y=(0, 0))
    assert app(parse_expr("x"), EMPTY, e) is BOTTOM


def test_guard_examples():
    e = env(x=(0, 10))
    assert guard_int(parse_bool("x < 5"), e) == env(x=(0, 4))
    assert guard_int(parse_bool("!(x < 5)"), e) == env(x=(5, 10))
    assert guard_int(parse_bool("x = 3"), e) == env(x=(3, 3))
    assert guard_int(parse_bool("x = 30"), e) is BOTTOM
    assert guard_int(parse_bool("x != 0"), env(x=(0, 0))) is BOTTOM
    assert guard_int(parse_bool("2 < x && x < 4"), e) == env(x=(3, 3))
    assert guard_int(parse_bool("!(2 < x && x < 4)"), env(x=(3, 3))) is BOTTOM


def test_eval_boolean_value():
    assert eval_interval(parse_expr("(x < 5)"), env(x=(0, 3))) == singleton(1)
    assert eval_interval(parse_expr("(x < 5)"), env(x=(7, 9))) == singleton(0)
    assert eval_interval(parse_expr("(x < 5)"), env(x=(0, 9))) == I(0, 1)


def test_exec_examples():
    assert interval_exec(parse_program("x := x + 1"), env(x=(0, 2))) == env(x=(1, 3))
    loop = parse_program("while x < 10 do { x := x + 1 }")
    assert interval_exec(loop, env(x=(0, 0))) == env(x=(10, 10))
    branch = parse_program("if x < 1 then { y := 1 } else { y := 2 }")
    assert interval_exec(branch, env(x=(0, 3), y=(0, 0))) == env(x=(0, 3), y=(1, 2))
    # unbounded growth is cut by widening
    grow = parse_program("while 0 < x do { x := x + 1; y := y + 2 }")
    out = interval_exec(grow, env(x=(1, 1), y=(0, 0)))
    assert out is BOTTOM or out["y"].hi == INF


def test_exec_observer_sees_atomic_commands():
    seen = []
    interval_exec(parse_program("x := 1; skip; y := x"), top_env(("x", "y")),
                  observe=lambda c, e: seen.append(e))
    assert [e.as_dict() for e in seen] == [
        {"x": "[1, 1]", "y": "[-inf, +inf]"},
        {"x": "[1, 1]", "y": "[-inf, +inf]"},
        {"x": "[1, 1]", "y": "[1, 1]"},
    ]


def test_lattice_helpers():
    a, b = env(x=(0, 1)), env(x=(3, 4))
    assert env_join(a, b) == env(x=(0, 4))
    assert env_meet(a, b) is BOTTOM
    assert env_leq(BOTTOM, a) and env_leq(a, env_join(a, b))
    assert contains(a, State(x=1, y=99)) and not contains(BOTTOM, State(x=0))


def _around(s, data):
    d = {}
    for k, v in s.items():
        lo = v - data.draw(st.integers(0, 2))
        hi = v + data.draw(st.integers(0, 2))
        d[k] = I(lo if data.draw(st.booleans()) else -INF, hi)
    return Env(d)


@given(exprs(), states(), st.data())
def test_eval_sound(e, s, data):
    assert eval_expr(e, s) in eval_interval(e, _around(s, data))


@given(bools(), states(), st.data())
def test_guard_sound(b, s, data):
    e = _around(s, data)
    if eval_bool(b, s):
        assert contains(guard_int(b, e), s)


@given(exprs(), states(), st.data())
def test_app_sound(ex, s, data):
    e = _around(s, data)
    v = eval_expr(ex, s)
    target = I(v - data.draw(st.integers(0, 2)), v + data.draw(st.integers(0, 2)))
    assert contains(app(ex, target, e), s)


@given(commands(annotations=False), states(), st.data())
def test_exec_sound(c, s, data):
    try:
        out = run(c, s, 300)
    except BudgetExhausted:
        assume(False)
    assert contains(interval_exec(c, _around(s, data)), out)


def test_widen_after_must_be_nonnegative():
    with pytest.raises(ValueError):
        interval_exec(parse_program("skip"), top_env(()), widen_after=-1)


def test_interval_suite_small():
    report = run_suite("interval-sound", OracleConfig(samples=100, seed=2))
    assert report.passed, report.counterexamples[:3]
