"""Random program generation and brute-force property suites over small
finite value domains."""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

from .ideal import PolicySpec, check_ideal_tini, ideal_monitor, tini_holds, wrap_policy
from .intervals import (
    BOTTOM, Interval, app, contains, env_leq, eval_interval, guard_int,
    interval_exec, ivl_arith, Env,
)
from .lang import (
    Agree, And, Assert, Assign, Assume, BinOp, Both, BoolVal, CondAgree, Const,
    Eq, If, Lt, Not, Skip, Var, While, collect_lattice, free_vars, negate, pretty,
    pretty_formula, seq,
)
from .monitors import Kind, format_formulas, mod_vars, monitor, static_d, static_i, static_m, toform, toint
from .relform import alpha, entails, fs_join, fs_leq, fs_meet, gamma, holds
from .semantics import FAULT, BudgetExhausted, State, collecting, eval_bool, eval_expr, run, universe

__all__ = [
    "OracleConfig", "SuiteReport", "SUITES", "gen_expr", "gen_bool", "gen_program",
    "gen_annotation", "run_suite", "format_state", "micro_lattice",
]

VAR_NAMES = ("x", "y", "z", "u", "v", "w")


@dataclass(frozen=True)
class OracleConfig:
    vars: int = 3
    lo: int = 0
    hi: int = 2
    depth: int = 4
    samples: int = 500
    seed: int = 0
    fuel: int = 2_000
    widen_after: int = 3
    free_loop_rate: float = 0.1

    def __post_init__(self):
        if not 1 <= self.vars <= len(VAR_NAMES):
            raise ValueError(f"vars must be between 1 and {len(VAR_NAMES)}")
        if self.lo > self.hi:
            raise ValueError("empty value range")
        if (self.hi - self.lo + 1) ** self.vars > 1000:
            raise ValueError("universe larger than 1000 states")
        if self.depth < 0 or self.samples < 0:
            raise ValueError("depth and samples must be nonnegative")

    @property
    def names(self) -> tuple:
        return VAR_NAMES[: self.vars]

    @property
    def domain(self) -> range:
        return range(self.lo, self.hi + 1)

    def universe(self) -> frozenset:
        return universe(self.names, self.domain)


@dataclass
class SuiteReport:
    suite: str
    checked: int = 0
    skipped: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def skip_rate(self) -> float:
        total = self.checked + self.skipped
        return self.skipped / total if total else 0.0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "checked": self.checked,
            "skipped": self.skipped,
            "skip_rate": round(self.skip_rate, 4),
            "passed": self.passed,
            "counterexamples": self.counterexamples,
        }


def format_state(s) -> str:
    return ",".join(f"{k}={v}" for k, v in sorted(s.items()))


def _fmt_set(S):
    if S is FAULT:
        return "fault"
    return sorted(format_state(t) for t in S)


# --- generators ------------------------------------------------------------

def gen_expr(rng: random.Random, names, depth: int):
    if depth <= 0 or rng.random() < 0.35:
        if rng.random() < 0.6:
            return Var(rng.choice(names))
        return Const(rng.randint(0, 3))
    r = rng.random()
    if r < 0.8:
        op = rng.choice("+-+-*")
        return BinOp(op, gen_expr(rng, names, depth - 1), gen_expr(rng, names, depth - 1))
    return BoolVal(gen_bool(rng, names, depth - 1))


def gen_bool(rng: random.Random, names, depth: int):
    r = rng.random()
    if depth > 0 and r < 0.15:
        return Not(gen_bool(rng, names, depth - 1))
    if depth > 0 and r < 0.25:
        return And(gen_bool(rng, names, depth - 1), gen_bool(rng, names, depth - 1))
    sub = max(depth - 1, 0)
    make = Lt if rng.random() < 0.6 else Eq
    return make(gen_expr(rng, names, min(sub, 1)), gen_expr(rng, names, min(sub, 1)))


def gen_annotation(rng: random.Random, names, kind=None):
    kind = kind or rng.choice((Assume, Assert))
    r = rng.random()
    if r < 0.6:
        phi = Agree(Var(rng.choice(names)))
    elif r < 0.75:
        phi = Agree(gen_expr(rng, names, 1))
    elif r < 0.9:
        phi = Both(gen_bool(rng, names, 1))
    else:
        phi = CondAgree(gen_bool(rng, names, 1), gen_expr(rng, names, 1))
    return kind((phi,))


def _gen_cmd(rng, cfg: OracleConfig, depth: int, protected: frozenset, annotate: bool):
    names = cfg.names
    writable = [x for x in names if x not in protected]
    if depth <= 0:
        if writable and rng.random() < 0.75:
            return Assign(rng.choice(writable), gen_expr(rng, names, 1))
        return Skip()
    r = rng.random()
    if annotate and r < 0.1:
        return gen_annotation(rng, names)
    if r < 0.3 and writable:
        return Assign(rng.choice(writable), gen_expr(rng, names, 2))
    if r < 0.55:
        return seq(_gen_cmd(rng, cfg, depth - 1, protected, annotate),
                   _gen_cmd(rng, cfg, depth - 1, protected, annotate))
    if r < 0.8:
        return If(gen_bool(rng, names, 1),
                  _gen_cmd(rng, cfg, depth - 1, protected, annotate),
                  _gen_cmd(rng, cfg, depth - 1, protected, annotate))
    if rng.random() < cfg.free_loop_rate:
        return While(gen_bool(rng, names, 1), _gen_cmd(rng, cfg, depth - 1, protected, annotate))
    if not writable:
        return Skip()
    # bounded counter: the body never writes the counter
    counter = rng.choice(writable)
    body = _gen_cmd(rng, cfg, depth - 1, protected | {counter}, annotate)
    bump = Assign(counter, BinOp("+", Var(counter), Const(1)))
    return While(Lt(Var(counter), Const(rng.randint(cfg.lo + 1, cfg.hi + 1))), seq(body, bump))


def gen_program(cfg: OracleConfig, rng: random.Random, annotated: bool = False):
    """Random command over ``cfg.names`` of nesting depth at most ``cfg.depth``.

    With ``annotated`` the program may open with an ``assume``, close with an
    ``assert``, and carry annotations inside.
    """
    body = _gen_cmd(rng, cfg, cfg.depth, frozenset(), annotated)
    if not annotated:
        return body
    parts = []
    if rng.random() < 0.7:
        parts.append(gen_annotation(rng, cfg.names, Assume))
    parts.append(body)
    if rng.random() < 0.8:
        parts.append(gen_annotation(rng, cfg.names, Assert))
    return seq(*parts)


def _random_subset(rng, items, p=0.5):
    return frozenset(x for x in sorted(items, key=repr) if rng.random() < p)


def _random_state(rng, cfg):
    return State({x: rng.randint(cfg.lo, cfg.hi) for x in cfg.names})


def _random_delta(rng, lattice, max_size=3):
    pool = sorted(lattice, key=pretty_formula)
    agree_vars = [phi for phi in pool if isinstance(phi, Agree) and isinstance(phi.expr, Var)]
    chosen = set()
    for _ in range(rng.randint(0, max_size)):
        src = agree_vars if agree_vars and rng.random() < 0.6 else pool
        if src:
            chosen.add(rng.choice(src))
    return frozenset(chosen)


def _rng(cfg, suite, i):
    return random.Random(f"{cfg.seed}:{suite}:{i}")


# --- fixed micro lattices --------------------------------------------------

def micro_lattice(variant: int = 0) -> frozenset:
    """A handful of small negation-closed carriers over ``x`` and ``y``."""
    x, y = Var("x"), Var("y")
    lt, eq = Lt(x, y), Eq(x, y)
    lattices = [
        {Agree(x), Agree(y), Both(lt), Both(Not(lt)), CondAgree(lt, y), CondAgree(Not(lt), y)},
        {Agree(BinOp("+", x, y)), Agree(x), Both(eq), Both(Not(eq)), CondAgree(eq, x),
         CondAgree(Not(eq), x)},
        {Agree(BoolVal(lt)), Agree(BinOp("-", x, y)), Both(Lt(x, Const(1))),
         Both(Not(Lt(x, Const(1)))), Agree(y), CondAgree(Lt(x, Const(1)), y)},
    ]
    return frozenset(lattices[variant % len(lattices)])


def _subsets(items):
    items = sorted(items, key=pretty_formula)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


# --- suites ----------------------------------------------------------------

def _cx(**kw) -> dict:
    return kw


def _galois(cfg: OracleConfig, report: SuiteReport):
    names = ("x", "y")
    U = universe(names, (cfg.lo, cfg.lo + 1))
    sets = [frozenset(c) for r in range(len(U) + 1) for c in itertools.combinations(sorted(U, key=repr), r)]
    tracking = sets + [FAULT]
    for variant in range(3):
        L = micro_lattice(variant)
        deltas = list(_subsets(L)) + [FAULT]
        for s in sorted(U, key=repr):
            gammas = {d: gamma(s, d, U) for d in deltas}
            alphas = {S: alpha(s, S, L) for S in tracking}
            for S in tracking:
                for d in deltas:
                    report.checked += 1
                    left = fs_leq(alphas[S], d)
                    right = d is FAULT or (S is not FAULT and gammas[d] is not FAULT and S <= gammas[d])
                    if left != right:
                        report.counterexamples.append(_cx(
                            law="adjunction", state=format_state(s), S=_fmt_set(S),
                            delta=format_formulas(d), alpha_leq=left, subset_gamma=right))
            for S in sets:
                report.checked += 1
                ga = gamma(s, alphas[S], U)
                if not S <= ga:
                    report.counterexamples.append(_cx(law="extensive", state=format_state(s), S=_fmt_set(S)))
            for d in deltas[:-1]:
                report.checked += 1
                if not fs_leq(alpha(s, gammas[d], L), d):
                    report.counterexamples.append(_cx(law="reductive", state=format_state(s),
                                                      delta=format_formulas(d)))
            for S1, S2 in itertools.product(sets, repeat=2):
                report.checked += 1
                if alpha(s, S1 | S2, L) != fs_join(alphas[S1], alphas[S2]):
                    report.counterexamples.append(_cx(law="additive", state=format_state(s),
                                                      S1=_fmt_set(S1), S2=_fmt_set(S2)))
            for d1, d2 in itertools.product(deltas[:-1], repeat=2):
                report.checked += 1
                if gamma(s, fs_meet(d1, d2), U) != gammas[d1] & gammas[d2]:
                    report.counterexamples.append(_cx(law="multiplicative", state=format_state(s),
                                                      delta1=format_formulas(d1),
                                                      delta2=format_formulas(d2)))


def _entailment(cfg: OracleConfig, report: SuiteReport):
    """Soundness of =>#, assignment preservation, and the frame property."""
    names = ("x", "y")
    U = sorted(universe(names, (cfg.lo, cfg.lo + 1)), key=repr)
    pairs = list(itertools.product(U, repeat=2))
    x, y = Var("x"), Var("y")
    for variant in range(3):
        L = micro_lattice(variant)
        queries = sorted(L | {Agree(BinOp("+", x, y)), Agree(BoolVal(Eq(x, y))),
                              Both(And(Lt(x, y), Eq(y, y)))}, key=pretty_formula)
        for d in _subsets(L):
            sat = [(s, t) for s, t in pairs if all(holds(p, s, t) for p in d)]
            for phi in queries:
                report.checked += 1
                if entails(d, phi) and not all(holds(phi, s, t) for s, t in sat):
                    report.counterexamples.append(_cx(law="entailment", delta=format_formulas(d),
                                                      phi=pretty_formula(phi)))
        for phi in sorted(L, key=pretty_formula):
            fv = free_vars(phi)
            for target, e in (("x", BinOp("+", y, Const(1))), ("y", x), ("x", Const(0))):
                if target in fv:
                    continue
                for s, t in pairs:
                    report.checked += 1
                    if holds(phi, s, t):
                        s2 = s.set(target, eval_expr(e, s))
                        t2 = t.set(target, eval_expr(e, t))
                        if not holds(phi, s2, t2):
                            report.counterexamples.append(_cx(
                                law="assignment-preservation", phi=pretty_formula(phi),
                                s=format_state(s), t=format_state(t)))
            for s, t in pairs:
                if not holds(phi, s, t):
                    continue
                for t2 in U:
                    if all(t2[v] == t[v] for v in fv):
                        report.checked += 1
                        if not holds(phi, s, t2):
                            report.counterexamples.append(_cx(law="frame", phi=pretty_formula(phi),
                                                              s=format_state(s), t=format_state(t2)))


def _sample_collecting(cfg: OracleConfig, i: int):
    rng = _rng(cfg, "collecting", i)
    c = gen_program(cfg, rng)
    S = _random_subset(rng, cfg.universe())
    try:
        got = collecting(c, S, cfg.fuel)
        outs = set()
        for s in S:
            try:
                outs.add(run(c, s, cfg.fuel))
            except BudgetExhausted:
                pass
    except BudgetExhausted:
        return None
    if got != frozenset(outs):
        return _cx(sample=i, program=pretty(c), S=_fmt_set(S), collecting=_fmt_set(got),
                   lifted=_fmt_set(outs))
    if collecting(c, FAULT) is not FAULT:
        return _cx(sample=i, program=pretty(c), law="fault-propagation")
    S2 = S | _random_subset(rng, cfg.universe())
    try:
        bigger = collecting(c, S2, cfg.fuel)
    except BudgetExhausted:
        return None
    if not got <= bigger:
        return _cx(sample=i, program=pretty(c), law="collecting-monotone", S=_fmt_set(S),
                   S2=_fmt_set(S2))
    return True


def _insert_assumes(rng, c, names):
    """Sprinkle assumes into ``c`` (assertion-free result)."""
    match c:
        case If(cond, then, orelse):
            return If(cond, _insert_assumes(rng, then, names), _insert_assumes(rng, orelse, names))
        case While(cond, body):
            return While(cond, _insert_assumes(rng, body, names))
    if c.__class__.__name__ == "Seq":
        return seq(_insert_assumes(rng, c.first, names), _insert_assumes(rng, c.second, names))
    if rng.random() < 0.3:
        return seq(gen_annotation(rng, names, Assume), c)
    return c


def _sample_monstatic(cfg: OracleConfig, i: int):
    rng = _rng(cfg, "monstatic", i)
    c = gen_program(cfg, rng)
    U = cfg.universe()
    s = _random_state(rng, cfg)
    S = _random_subset(rng, U)
    try:
        mon = ideal_monitor(c, s, S, cfg.fuel)
        col = collecting(c, S, cfg.fuel)
    except BudgetExhausted:
        return None
    if mon.tracking != col:
        return _cx(sample=i, law="annotation-free-equal", program=pretty(c), state=format_state(s),
                   S=_fmt_set(S), ideal=_fmt_set(mon.tracking), collecting=_fmt_set(col))
    c2 = _insert_assumes(rng, c, cfg.names)
    try:
        mon2 = ideal_monitor(c2, s, S, cfg.fuel)
        col2 = collecting(c2, S, cfg.fuel)
    except BudgetExhausted:
        return None
    if mon2.tracking is FAULT or not mon2.tracking <= col2:
        return _cx(sample=i, law="assertion-free-subset", program=pretty(c2), state=format_state(s),
                   S=_fmt_set(S), ideal=_fmt_set(mon2.tracking), collecting=_fmt_set(col2))
    return True


def _sample_ideal_tini(cfg: OracleConfig, i: int):
    rng = _rng(cfg, "ideal-tini", i)
    c = gen_program(cfg, rng)
    s1 = _random_state(rng, cfg)
    names = list(cfg.names)
    in_vars = _random_subset(rng, names)
    out_vars = _random_subset(rng, names) or frozenset({rng.choice(names)})
    policy = PolicySpec(in_vars, out_vars)
    try:
        run(c, s1, cfg.fuel)
        U = cfg.universe()
        wrapped = wrap_policy(c, policy)
        verdict = ideal_monitor(wrapped, s1, U, cfg.fuel)
        secure = tini_holds(c, policy, s1, cfg.domain, cfg.fuel)
    except BudgetExhausted:
        return None
    if (not verdict.faulted) != secure:
        return _cx(sample=i, program=pretty(wrapped), state=format_state(s1),
                   in_vars=sorted(in_vars), out_vars=sorted(out_vars),
                   ideal="fault" if verdict.faulted else "pass", tini=secure)
    return True


def _static_for(kind: Kind, c, delta, s, s_after, modified, lattice, widen_after):
    if kind is Kind.D:
        return static_d(c, delta)
    if kind is Kind.M:
        return static_m(c, delta, modified)
    return static_i(c, delta, s, s_after, lattice, widen_after)[0]


def _sample_soundness(kind: Kind, cfg: OracleConfig, i: int):
    rng = _rng(cfg, f"soundness-{kind.value}", i)
    c = gen_program(cfg, rng, annotated=True)
    L = collect_lattice(c) | {Agree(Var(x)) for x in cfg.names}
    U = cfg.universe()
    s = _random_state(rng, cfg)
    delta = _random_delta(rng, L)
    S = gamma(s, delta, U)
    try:
        ideal = ideal_monitor(c, s, S, cfg.fuel)
        out = monitor(kind, c, s, delta, L, cfg.fuel, cfg.widen_after, trace=False)
    except BudgetExhausted:
        return None
    base = dict(sample=i, monitor=kind.value, program=pretty(c), state=format_state(s),
                delta=format_formulas(delta))
    if out.major != ideal.major:
        return _cx(law="major-state", **base)
    if ideal.faulted:
        if not out.faulted:
            return _cx(law="ideal-fault-missed", monitor_result=format_formulas(out.formulas), **base)
    elif not out.faulted:
        for phi in out.formulas:
            if phi not in L or not all(holds(phi, out.major, t) for t in ideal.tracking):
                return _cx(law="alpha-leq-monitor", formula=pretty_formula(phi),
                           tracking=_fmt_set(ideal.tracking), **base)
    # static transfer against the collecting semantics, relative to another run
    other = gen_program(cfg, rng)
    body = gen_program(cfg, rng)
    try:
        s_after = run(other, s, cfg.fuel)
        reached = collecting(body, S, cfg.fuel)
    except BudgetExhausted:
        return True
    modified = mod_vars(body) | mod_vars(other)
    static = _static_for(kind, body, delta, s, s_after, modified, L, cfg.widen_after)
    if static is FAULT:
        return _cx(law="static-fault", static_program=pretty(body), **base)
    if static is not None:
        for phi in static:
            if not all(holds(phi, s_after, t) for t in reached):
                return _cx(law="static-transfer", static_program=pretty(body),
                           other_program=pretty(other), formula=pretty_formula(phi), **base)
    elif reached:
        return _cx(law="static-bottom", static_program=pretty(body), **base)
    return True


def _granger(cfg: OracleConfig, report: SuiteReport):
    names = ("x", "y")
    values = range(cfg.lo, cfg.hi + 1)
    U = sorted(universe(names, values), key=repr)
    ends = list(values)
    inf = math.inf
    ivls = [Interval(a, b) for a in ends for b in ends if a <= b]
    ivls += [Interval(-inf, b) for b in ends] + [Interval(a, inf) for a in ends]
    ivls.append(Interval(-inf, inf))
    envs = [Env({"x": a, "y": b}) for a in ivls for b in ivls] + [BOTTOM]
    inside = {}

    def members(env):
        if env not in inside:
            inside[env] = frozenset(t for t in U if contains(env, t))
        return inside[env]

    for variant in range(3):
        L = micro_lattice(variant)
        deltas = list(_subsets(L))
        for s in U:
            gammas = {}

            def conc(d):
                if d not in gammas:
                    gammas[d] = frozenset(gamma(s, d, U))
                return gammas[d]

            for env in envs:
                for d in deltas:
                    report.checked += 1
                    want = members(env) & conc(d)
                    reduced_env = toint(env, d, s)
                    reduced_delta = toform(env, d, s)
                    problems = []
                    if members(reduced_env) & conc(d) != want:
                        problems.append("toint-soundness")
                    if members(env) & conc(reduced_delta) != want:
                        problems.append("toform-soundness")
                    if not env_leq(reduced_env, env):
                        problems.append("toint-reduction")
                    if not fs_leq(reduced_delta, d):
                        problems.append("toform-reduction")
                    if problems:
                        report.counterexamples.append(_cx(
                            law=problems, state=format_state(s), env=repr(env),
                            delta=format_formulas(d)))
            # the Fault cases
            for env in envs[:5]:
                report.checked += 1
                if toint(env, FAULT, s) != env or toform(FAULT, frozenset(L), s) != frozenset(L):
                    report.counterexamples.append(_cx(law="fault-identity", env=repr(env)))


def _arith_exact(report: SuiteReport):
    bounds = range(-4, 5)
    ivls = [Interval(a, a + w) for a in bounds for w in range(0, 9)]
    for i1 in ivls:
        vals1 = range(i1.lo, i1.hi + 1)
        for i2 in ivls:
            vals2 = range(i2.lo, i2.hi + 1)
            for op, f in (("+", int.__add__), ("-", int.__sub__), ("*", int.__mul__)):
                report.checked += 1
                got = ivl_arith(op, i1, i2)
                results = [f(a, b) for a in vals1 for b in vals2]
                if got != Interval(min(results), max(results)):
                    report.counterexamples.append(_cx(law="arith-exact", op=op, left=str(i1),
                                                      right=str(i2), got=str(got)))


def _random_env_around(rng, s):
    steps = (0, 0, 1, 2, math.inf)
    return Env({x: Interval(v - rng.choice(steps), v + rng.choice(steps)) for x, v in s.items()})


def _sample_interval(cfg: OracleConfig, i: int):
    rng = _rng(cfg, "interval-sound", i)
    c = gen_program(cfg, rng)
    s = _random_state(rng, cfg)
    env = _random_env_around(rng, s)
    base = dict(sample=i, program=pretty(c), state=format_state(s), env=repr(env))
    b = gen_bool(rng, cfg.names, 2)
    if eval_bool(b, s) and not contains(guard_int(b, env), s):
        return _cx(law="guard", cond=repr(b), **base)
    e = gen_expr(rng, cfg.names, 2)
    v = eval_expr(e, s)
    target = Interval(v - rng.choice((0, 1, math.inf)), v + rng.choice((0, 1, math.inf)))
    if not contains(app(e, target, env), s):
        return _cx(law="app", expr=repr(e), target=str(target), **base)
    if v not in eval_interval(e, env):
        return _cx(law="eval", expr=repr(e), **base)
    try:
        s2 = run(c, s, cfg.fuel)
    except BudgetExhausted:
        return None
    result = interval_exec(c, env, cfg.widen_after)
    if not contains(result, s2):
        return _cx(law="exec", final=format_state(s2), result=repr(result), **base)
    return True


def _sample_monotone(cfg: OracleConfig, i: int):
    rng = _rng(cfg, "monotone", i)
    c = gen_program(cfg, rng, annotated=True)
    U = cfg.universe()
    s = _random_state(rng, cfg)
    S = _random_subset(rng, U, rng.choice((0.1, 0.3, 0.6)))
    S2 = S | _random_subset(rng, U, rng.choice((0.1, 0.3)))
    try:
        small = ideal_monitor(c, s, S, cfg.fuel)
        big = ideal_monitor(c, s, S2, cfg.fuel)
    except BudgetExhausted:
        return None
    if not (big.tracking is FAULT or (small.tracking is not FAULT and small.tracking <= big.tracking)):
        return _cx(sample=i, program=pretty(c), state=format_state(s), S=_fmt_set(S),
                   S2=_fmt_set(S2), small=_fmt_set(small.tracking), big=_fmt_set(big.tracking))
    return True


_SAMPLERS = {
    "collecting": _sample_collecting,
    "monstatic": _sample_monstatic,
    "ideal-tini": _sample_ideal_tini,
    "soundness-d": partial(_sample_soundness, Kind.D),
    "soundness-m": partial(_sample_soundness, Kind.M),
    "soundness-i": partial(_sample_soundness, Kind.I),
    "interval-sound": _sample_interval,
    "monotone": _sample_monotone,
}

_EXHAUSTIVE = {
    "galois": _galois,
    "entailment": _entailment,
    "granger": _granger,
}

SUITES = ("galois", "entailment", "collecting", "monstatic", "ideal-tini", "soundness-d",
          "soundness-m", "soundness-i", "granger", "interval-sound", "monotone")


def _run_sample(name, cfg, i):
    return _SAMPLERS[name](cfg, i)


def run_suite(name: str, cfg: OracleConfig, workers: int = 1) -> SuiteReport:
    """Run one property suite; counterexamples are listed in sample order."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    report = SuiteReport(name)
    if name in _EXHAUSTIVE:
        _EXHAUSTIVE[name](cfg, report)
        return report
    if name == "interval-sound":
        _arith_exact(report)
    fn = partial(_run_sample, name, cfg)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, range(cfg.samples), chunksize=max(1, cfg.samples // (4 * workers))))
    else:
        results = [fn(i) for i in range(cfg.samples)]
    for res in results:
        if res is None:
            report.skipped += 1
        else:
            report.checked += 1
            if res is not True:
                report.counterexamples.append(res)
    return report


def config_json(cfg: OracleConfig) -> dict:
    return asdict(cfg)
