from pathlib import Path

import pytest
from hypothesis import given

from ifmon.intervals import BOTTOM, Env, Interval, singleton, top_env
from ifmon.lang import Agree, BinOp, Both, Var, collect_lattice, parse_bool, parse_formula, parse_program
from ifmon.monitors import (
    Kind, format_formulas, mod_vars, monitor, static_d, static_i, static_m, toform, toint,
)
from ifmon.oracle import OracleConfig, run_suite
from ifmon.semantics import FAULT, BudgetExhausted, State, run

from strategies import commands, states

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def load(name):
    return parse_program((PROGRAMS / name).read_text())


def hash_state(**kw):
    base = dict(seed=3, a=0, b=0, r=0, secret_base=2, secret_conf=1, secret_number=5)
    base.update(kw)
    return State(base)


def test_kind_parse():
    assert Kind.parse("D") is Kind.D and Kind.parse(Kind.I) is Kind.I
    with pytest.raises(ValueError):
        Kind.parse("x")


def test_secret_branch_trace_under_d():
    c = load("secret_branch.ifm")
    out = monitor("d", c, State(public=0, secret=1, y=0), lattice=collect_lattice(c))
    assert not out.faulted
    assert out.major == State(public=1, secret=1, y=0)
    steps = [(ev.kind, format_formulas(ev.formulas)) for ev in out.trace]
    assert steps == [
        ("assume", ["A public"]),
        ("branch", ["A public", "B 0 < secret"]),
        ("assign", ["A public", "B 0 < secret"]),
        ("merge", []),
        ("assign", ["A y"]),
        ("assert", ["A y"]),
    ]
    assert out.trace[1].text.startswith("then (high)")


def test_secret_branch_leak_faults_everywhere():
    c = load("secret_branch_leak.ifm")
    for kind in Kind:
        out = monitor(kind, c, State(public=0, secret=1, y=0), lattice=collect_lattice(c))
        assert out.faulted
        assert out.first_fault().kind == "assert"


def test_seeded_hash_intervals_and_verdicts():
    c = load("seeded_hash.ifm")
    s = hash_state()
    L = collect_lattice(c)
    out = monitor("i", c, s, lattice=L)
    assert not out.faulted
    static = [ev for ev in out.trace if ev.kind == "static"]
    assert len(static) == 1
    info = static[0].intervals
    assert info["entry"]["seed"] == "[3, 3]"
    assert info["entry"]["secret_conf"] == "[0, 0]"
    assert info["steps"][-1]["env"]["seed"] == "[4, 4]"
    merge = [ev for ev in out.trace if ev.kind == "merge"][0]
    assert format_formulas(merge.formulas) == ["A seed"]
    assert monitor("m", c, s, lattice=L).faulted
    assert monitor("d", c, s, lattice=L).faulted


def test_seeded_hash_else_branch_under_i():
    c = load("seeded_hash.ifm")
    out = monitor("i", c, hash_state(secret_conf=0), lattice=collect_lattice(c))
    assert not out.faulted


def test_counter_passes_everywhere():
    c = load("counter.ifm")
    for kind in Kind:
        out = monitor(kind, c, State(n=4, i=0, s=0), lattice=collect_lattice(c))
        assert not out.faulted and out.major["s"] == 6


def test_constant_branch_faults_under_d():
    c = load("constant_branch.ifm")
    assert monitor("d", c, State(inhi=1, outlo=0)).faulted
    assert not monitor("i", c, State(inhi=1, outlo=0)).faulted


def test_low_branch_keeps_monitored_formulas():
    c = parse_program("assume A x; if x < 1 then { y := x } else { y := 0 }; assert A y")
    for kind in Kind:
        out = monitor(kind, c, State(x=0, y=5))
        assert not out.faulted
        assert "then (low)" in out.trace[1].text


def test_loop_exit_rules():
    c = parse_program("while h < 2 do { h := h + 1 }; assert A z")
    s = State(h=0, z=0)
    delta = {Agree(Var("z"))}
    assert monitor("d", c, s, delta).faulted
    assert not monitor("m", c, s, delta).faulted
    assert not monitor("i", c, s, delta).faulted
    low = parse_program("assume A h; while h < 2 do { h := h + 1 }; assert A h")
    for kind in Kind:
        out = monitor(kind, low, s)
        assert not out.faulted
        assert Both(parse_bool("!(h < 2)")) in out.formulas


def test_toint_and_toform():
    s = State(seed=3, x=1)
    env = toint(top_env(("seed", "x")), {Agree(Var("seed"))}, s)
    assert env["seed"] == singleton(3) and env["x"] == Interval(float("-inf"), float("inf"))
    env2 = toint(top_env(("x",)), {Both(parse_bool("x < 5")), Both(parse_bool("0 < x"))}, s)
    assert env2["x"] == Interval(1, 4)
    assert toint(top_env(("x",)), {Agree(Var("x")), Both(parse_bool("x < 0"))}, s) is BOTTOM
    assert toint(top_env(("x",)), FAULT, s) == top_env(("x",))
    got = toform(Env({"seed": singleton(4), "x": Interval(0, 2)}), frozenset(), State(seed=4, x=1))
    assert got == {Agree(Var("seed"))}
    assert toform(Env({"seed": singleton(4)}), frozenset(), State(seed=4), lattice=set()) == frozenset()
    assert toform(BOTTOM, {Agree(Var("x"))}, s) == {Agree(Var("x"))}


def test_static_parts():
    c = parse_program("y := 1")
    delta = frozenset(parse_formula("A x, A y"))
    assert static_d(c, delta) == frozenset()
    assert static_m(c, delta) == {Agree(Var("x"))}
    assert static_d(c, FAULT) is FAULT and static_m(c, FAULT) is FAULT
    contradiction = frozenset(parse_formula("B x < 1, B !(x < 1)"))
    assert static_d(c, contradiction) is None and static_m(c, contradiction) is None
    s = State(x=0, y=1)
    result, entry, exit_env = static_i(c, delta, s, s)
    assert result == {Agree(Var("x")), Agree(Var("y"))}
    assert exit_env["y"] == singleton(1)
    assert static_i(c, delta, s, s, refine=parse_bool("0 < x"))[0] is None


def test_mod_vars():
    c = parse_program("x := 1; if a < 1 then { y := 2 } else { while b < 1 do { z := 3 } }")
    assert mod_vars(c) == {"x", "y", "z"}


def test_assign_of_low_expression_adds_agreement():
    c = parse_program("y := x + 1")
    out = monitor("d", c, State(x=0, y=0), {Agree(Var("x"))})
    assert out.formulas == {Agree(Var("x")), Agree(Var("y"))}
    lattice = {Agree(Var("x")), Agree(BinOp("+", Var("x"), Var("x")))}
    out = monitor("d", c, State(x=0, y=0), {Agree(Var("x"))}, lattice=lattice)
    assert out.formulas == {Agree(Var("x"))}


def test_budget_exhaustion():
    c = parse_program("while 0 < 1 do { skip }")
    with pytest.raises(BudgetExhausted):
        monitor("m", c, State(), fuel=50)


@given(commands(), states())
def test_major_state_matches_run(c, s):
    try:
        expected = run(c, s, 300)
    except BudgetExhausted:
        return
    for kind in Kind:
        out = monitor(kind, c, s, lattice=collect_lattice(c), fuel=300, trace=False)
        assert out.major == expected
        assert out.trace == []


@pytest.mark.parametrize("suite", ["soundness-d", "soundness-m", "soundness-i", "monstatic"])
def test_soundness_suites_small(suite):
    report = run_suite(suite, OracleConfig(samples=40, seed=9))
    assert report.passed, report.counterexamples[:3]
    assert report.checked > 0
