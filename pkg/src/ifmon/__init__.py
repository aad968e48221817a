"""Relational information-flow monitors for a small annotated while-language."""

from .ideal import IdealResult, PolicySpec, check_ideal_tini, ideal_monitor, ideal_monitor_alt, tini_holds
from .lang import collect_lattice, parse_program, pretty
from .monitors import Kind, monitor
from .semantics import FAULT, BudgetExhausted, State, collecting, run

__version__ = "0.1.0"

__all__ = [
    "FAULT", "BudgetExhausted", "State", "run", "collecting", "parse_program", "pretty",
    "collect_lattice", "ideal_monitor", "ideal_monitor_alt", "tini_holds", "check_ideal_tini",
    "PolicySpec", "IdealResult", "Kind", "monitor",
]
