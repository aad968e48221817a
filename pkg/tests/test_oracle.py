import json
import random

import pytest

from ifmon import oracle
from ifmon.lang import pretty, program_vars
from ifmon.oracle import SUITES, OracleConfig, config_json, gen_program, micro_lattice, run_suite


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(vars=0)
    with pytest.raises(ValueError):
        OracleConfig(lo=3, hi=1)
    with pytest.raises(ValueError):
        OracleConfig(vars=4, lo=0, hi=9)
    cfg = OracleConfig(vars=2, lo=-1, hi=1)
    assert cfg.names == ("x", "y") and list(cfg.domain) == [-1, 0, 1]
    assert len(cfg.universe()) == 9


def test_generated_programs_stay_in_scope():
    cfg = OracleConfig(vars=2, depth=3)
    rng = random.Random(4)
    for _ in range(50):
        c = gen_program(cfg, rng, annotated=True)
        assert program_vars(c) <= set(cfg.names)


def test_generation_is_deterministic():
    cfg = OracleConfig()
    a = [pretty(gen_program(cfg, random.Random(7))) for _ in range(3)]
    b = [pretty(gen_program(cfg, random.Random(7))) for _ in range(3)]
    assert a == b


def test_micro_lattices_cycle():
    carriers = [micro_lattice(v) for v in range(3)]
    assert all(carriers) and len(set(carriers)) == 3
    assert micro_lattice(4) == carriers[1]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope", OracleConfig())


def test_workers_agree_with_serial_run():
    cfg = OracleConfig(samples=30, seed=3)
    serial = run_suite("soundness-m", cfg)
    parallel = run_suite("soundness-m", cfg, workers=2)
    assert serial.to_json() == parallel.to_json()


def test_report_json_is_serialisable():
    report = run_suite("monotone", OracleConfig(samples=20))
    data = json.loads(json.dumps(report.to_json()))
    assert data["suite"] == "monotone" and data["passed"]
    assert set(config_json(OracleConfig())) >= {"vars", "lo", "hi", "samples", "seed"}


def test_oracle_catches_a_broken_static_part(monkeypatch):
    # keeping every formula across modified variables is unsound
    monkeypatch.setattr(oracle, "static_m", lambda c, delta, modified=None: delta)
    report = run_suite("soundness-m", OracleConfig(samples=150, seed=1))
    assert not report.passed
    assert any(cx["law"] in ("static-transfer", "alpha-leq-monitor")
               for cx in report.counterexamples)


def test_oracle_catches_a_broken_guard(monkeypatch):
    from ifmon import intervals

    real = intervals._guard

    def sloppy(b, env, positive):
        out = real(b, env, positive)
        if out is intervals.BOTTOM or isinstance(out, intervals.Env) is False:
            return out
        # pretend every guard pins the first variable to 0
        name = next(iter(out), None)
        return out if name is None else out.set(name, intervals.singleton(0))

    monkeypatch.setattr(intervals, "_guard", sloppy)
    report = run_suite("interval-sound", OracleConfig(samples=100, seed=1))
    assert not report.passed


def test_suite_names():
    assert len(SUITES) == len(set(SUITES)) == 11
