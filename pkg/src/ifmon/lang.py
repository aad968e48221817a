"""Annotated while-language: AST, parser, pretty-printer and formula lattice.

Concrete syntax (one program per ``.ifm`` file)::

    assume A public;
    if secret > 0 then { public := public + 1; } else { skip; }
    y := 0;
    assert A y

Comparisons ``>``, ``<=``, ``>=`` and ``!=`` are sugar over ``<``, ``=`` and
``!``.  A bare arithmetic expression in a boolean position ``e`` reads as
``!(e = 0)``.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Const", "Var", "BinOp", "BoolVal", "Lt", "Eq", "Not", "And",
    "Skip", "Assign", "Seq", "If", "While", "Assume", "Assert",
    "Agree", "Both", "CondAgree", "Expr", "BoolExpr", "Cmd", "BasicFormula",
    "ParseError", "parse_program", "parse_expr", "parse_bool", "parse_formula",
    "pretty", "pretty_expr", "pretty_bool", "pretty_formula",
    "free_vars", "program_vars", "negate", "collect_lattice", "seq",
    "formula_key",
]


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "+", "-", "*"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class BoolVal:
    """A boolean expression used as an integer (0 or 1)."""
    cond: "BoolExpr"


@dataclass(frozen=True)
class Lt:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


Expr = Union[Const, Var, BinOp, BoolVal]
BoolExpr = Union[Lt, Eq, Not, And]


# --- relational formulas ---------------------------------------------------

@dataclass(frozen=True)
class Agree:
    """``A e``: both states give ``e`` the same value."""
    expr: Expr


@dataclass(frozen=True)
class Both:
    """``B b``: ``b`` holds in both states."""
    cond: BoolExpr


@dataclass(frozen=True)
class CondAgree:
    """``B b => A e``."""
    cond: BoolExpr
    expr: Expr


BasicFormula = Union[Agree, Both, CondAgree]


# --- commands --------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr


@dataclass(frozen=True)
class Seq:
    first: "Cmd"
    second: "Cmd"


@dataclass(frozen=True)
class If:
    cond: BoolExpr
    then: "Cmd"
    orelse: "Cmd"


@dataclass(frozen=True)
class While:
    cond: BoolExpr
    body: "Cmd"


@dataclass(frozen=True)
class Assume:
    formula: tuple  # of BasicFormula, read conjunctively


@dataclass(frozen=True)
class Assert:
    formula: tuple


Cmd = Union[Skip, Assign, Seq, If, While, Assume, Assert]

_EXPR_TYPES = (Const, Var, BinOp, BoolVal)
_BOOL_TYPES = (Lt, Eq, Not, And)


def seq(*cmds: Cmd) -> Cmd:
    """Right-associated sequence of ``cmds`` (``skip`` when empty)."""
    if not cmds:
        return Skip()
    result = cmds[-1]
    for c in reversed(cmds[:-1]):
        result = Seq(c, result)
    return result


# --- tokenizer -------------------------------------------------------------

KEYWORDS = {"skip", "if", "then", "else", "while", "do", "assume", "assert", "A", "B"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<=|>=|!=|&&|=>|[<>=!+\-*(){};,])
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass
class _Token:
    kind: str  # "int", "id", "kw", "op", "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            tokens.append(_Token("int", m.group(), line, col))
        elif kind == "id":
            word = m.group()
            tokens.append(_Token("kw" if word in KEYWORDS else "id", word, line, col))
        elif kind == "op":
            tokens.append(_Token("op", m.group(), line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


# --- parser ----------------------------------------------------------------

def _as_expr(node):
    if isinstance(node, _BOOL_TYPES):
        return BoolVal(node)
    return node


def _as_bool(node):
    if isinstance(node, _EXPR_TYPES):
        return Not(Eq(node, Const(0)))
    return node


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def advance(self) -> _Token:
        t = self.tok
        self.pos += 1
        return t

    def error(self, expected: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected {expected}, found {found}", t.line, t.col)

    def expect(self, text: str) -> _Token:
        if not self.at(text):
            self.error(repr(text))
        return self.advance()

    def expect_eof(self):
        if self.tok.kind != "eof":
            self.error("end of input")

    # commands

    def sequence(self) -> Cmd:
        stmts = [self.statement()]
        while True:
            if self.at(";"):
                self.advance()
            elif not self.tokens[self.pos - 1].text == "}":
                break  # ";" may only be left out after a closing brace
            if self.tok.kind == "eof" or self.at("}"):
                break
            stmts.append(self.statement())
        return seq(*stmts)

    def block(self) -> Cmd:
        self.expect("{")
        if self.at("}"):
            self.advance()
            return Skip()
        body = self.sequence()
        self.expect("}")
        return body

    def statement(self) -> Cmd:
        t = self.tok
        if self.at("skip"):
            self.advance()
            return Skip()
        if self.at("if"):
            self.advance()
            cond = _as_bool(self.boolean())
            self.expect("then")
            then = self.block()
            orelse = Skip()
            if self.at("else"):
                self.advance()
                orelse = self.block()
            return If(cond, then, orelse)
        if self.at("while"):
            self.advance()
            cond = _as_bool(self.boolean())
            self.expect("do")
            return While(cond, self.block())
        if self.at("assume"):
            self.advance()
            return Assume(self.formula())
        if self.at("assert"):
            self.advance()
            return Assert(self.formula())
        if self.at("{"):
            return self.block()
        if t.kind == "id":
            self.advance()
            self.expect(":=")
            return Assign(t.text, _as_expr(self.boolean()))
        self.error("a command")

    # formulas

    def formula(self) -> tuple:
        parts = [self.basic_formula()]
        while self.at(","):
            self.advance()
            parts.append(self.basic_formula())
        return tuple(parts)

    def basic_formula(self) -> BasicFormula:
        if self.at("A"):
            self.advance()
            return Agree(_as_expr(self.boolean()))
        if self.at("B"):
            self.advance()
            cond = _as_bool(self.boolean())
            if self.at("=>"):
                self.advance()
                self.expect("A")
                return CondAgree(cond, _as_expr(self.boolean()))
            return Both(cond)
        self.error("a formula ('A e', 'B b' or 'B b => A e')")

    # expressions; booleans and integers share one precedence ladder

    def boolean(self):
        left = self.negation()
        while self.at("&&"):
            self.advance()
            right = self.negation()
            left = And(_as_bool(left), _as_bool(right))
        return left

    def negation(self):
        if self.at("!"):
            self.advance()
            return Not(_as_bool(self.negation()))
        return self.comparison()

    def comparison(self):
        left = self.arith()
        for op in ("<", ">", "<=", ">=", "=", "!="):
            if self.at(op):
                self.advance()
                right = _as_expr(self.arith())
                left = _as_expr(left)
                return {
                    "<": lambda: Lt(left, right),
                    ">": lambda: Lt(right, left),
                    "<=": lambda: Not(Lt(right, left)),
                    ">=": lambda: Not(Lt(left, right)),
                    "=": lambda: Eq(left, right),
                    "!=": lambda: Not(Eq(left, right)),
                }[op]()
        return left

    def arith(self):
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.term()
            left = BinOp(op, _as_expr(left), _as_expr(right))
        return left

    def term(self):
        left = self.unary()
        while self.at("*"):
            self.advance()
            right = self.unary()
            left = BinOp("*", _as_expr(left), _as_expr(right))
        return left

    def unary(self):
        if self.at("-"):
            self.advance()
            if self.tok.kind == "int":
                return Const(-int(self.advance().text))
            return BinOp("-", Const(0), _as_expr(self.unary()))
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Const(int(t.text))
        if t.kind == "id":
            self.advance()
            return Var(t.text)
        if self.at("("):
            self.advance()
            inner = self.boolean()
            self.expect(")")
            return inner
        self.error("an expression")


def parse_program(text: str) -> Cmd:
    """Parse a whole program. Raises :class:`ParseError` with line/column."""
    p = _Parser(text)
    c = p.sequence()
    p.expect_eof()
    return c


def parse_expr(text: str) -> Expr:
    p = _Parser(text)
    e = _as_expr(p.boolean())
    p.expect_eof()
    return e


def parse_bool(text: str) -> BoolExpr:
    p = _Parser(text)
    b = _as_bool(p.boolean())
    p.expect_eof()
    return b


def parse_formula(text: str) -> tuple:
    """Parse a comma-separated conjunction of basic formulas."""
    p = _Parser(text)
    f = p.formula()
    p.expect_eof()
    return f


# --- pretty-printer --------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _expr_prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Const) and e.value < 0:
        return 2  # "-3" re-parses as a literal only below "+"/"-"... and as a factor
    return 3


def pretty_expr(e: Expr) -> str:
    match e:
        case Const(value):
            return str(value)
        case Var(name):
            return name
        case BoolVal(cond):
            return f"({pretty_bool(cond)})"
        case BinOp(op, left, right):
            prec = _PREC[op]
            ls = pretty_expr(left)
            rs = pretty_expr(right)
            if _expr_prec(left) < prec:
                ls = f"({ls})"
            if _expr_prec(right) <= prec:
                rs = f"({rs})"
            return f"{ls} {op} {rs}"
    raise TypeError(f"not an expression: {e!r}")


def pretty_bool(b: BoolExpr) -> str:
    match b:
        case Lt(left, right):
            return f"{pretty_expr(left)} < {pretty_expr(right)}"
        case Eq(left, right):
            return f"{pretty_expr(left)} = {pretty_expr(right)}"
        case Not(arg):
            return f"!({pretty_bool(arg)})"
        case And(left, right):
            rs = pretty_bool(right)
            if isinstance(right, And):
                rs = f"({rs})"
            return f"{pretty_bool(left)} && {rs}"
    raise TypeError(f"not a boolean expression: {b!r}")


def _formula_expr(e: Expr) -> str:
    s = pretty_expr(e)
    return f"({s})" if isinstance(e, BinOp) else s


def pretty_formula(f) -> str:
    """Pretty-print a basic formula or a conjunction (tuple) of them."""
    match f:
        case Agree(expr):
            return f"A {_formula_expr(expr)}"
        case Both(cond):
            return f"B {pretty_bool(cond)}"
        case CondAgree(cond, expr):
            return f"B {pretty_bool(cond)} => A {_formula_expr(expr)}"
        case tuple() | list():
            return ", ".join(pretty_formula(p) for p in f)
    raise TypeError(f"not a formula: {f!r}")


@functools.lru_cache(maxsize=65536)
def formula_key(f: BasicFormula) -> str:
    """Stable sort key for formulas."""
    return pretty_formula(f)


def _pretty_lines(c: Cmd, indent: str) -> list[str]:
    match c:
        case Skip():
            return [indent + "skip"]
        case Assign(target, expr):
            return [f"{indent}{target} := {pretty_expr(expr)}"]
        case Assume(formula):
            return [f"{indent}assume {pretty_formula(formula)}"]
        case Assert(formula):
            return [f"{indent}assert {pretty_formula(formula)}"]
        case If(cond, then, orelse):
            inner = indent + "  "
            return ([f"{indent}if {pretty_bool(cond)} then {{"]
                    + _pretty_lines(then, inner)
                    + [f"{indent}}} else {{"]
                    + _pretty_lines(orelse, inner)
                    + [f"{indent}}}"])
        case While(cond, body):
            return ([f"{indent}while {pretty_bool(cond)} do {{"]
                    + _pretty_lines(body, indent + "  ")
                    + [f"{indent}}}"])
        case Seq():
            items = []
            while isinstance(c, Seq):
                items.append(c.first)
                c = c.second
            items.append(c)
            lines = []
            for i, item in enumerate(items):
                if isinstance(item, Seq):
                    # left-nested sequence: keep its grouping with a bare block
                    chunk = [indent + "{"] + _pretty_lines(item, indent + "  ") + [indent + "}"]
                else:
                    chunk = _pretty_lines(item, indent)
                if i < len(items) - 1:
                    chunk[-1] += ";"
                lines.extend(chunk)
            return lines
    raise TypeError(f"not a command: {c!r}")


def pretty(c: Cmd) -> str:
    """Canonical program text; ``parse_program(pretty(c)) == c``."""
    return "\n".join(_pretty_lines(c, ""))


# --- syntactic helpers -----------------------------------------------------

def _walk_vars(x) -> Iterator[str]:
    match x:
        case Const():
            return
        case Var(name):
            yield name
        case BinOp(_, left, right) | Lt(left, right) | Eq(left, right) | And(left, right):
            yield from _walk_vars(left)
            yield from _walk_vars(right)
        case BoolVal(inner) | Not(inner) | Agree(inner) | Both(inner):
            yield from _walk_vars(inner)
        case CondAgree(cond, expr):
            yield from _walk_vars(cond)
            yield from _walk_vars(expr)
        case tuple() | list():
            for part in x:
                yield from _walk_vars(part)
        case _:
            raise TypeError(f"cannot take free variables of {x!r}")


def free_vars(x) -> frozenset:
    """Identifiers occurring in an expression, boolean, or formula."""
    return frozenset(_walk_vars(x))


def program_vars(c: Cmd) -> frozenset:
    """Every identifier occurring anywhere in ``c``, assignment targets included."""
    names = set()
    stack = [c]
    while stack:
        c = stack.pop()
        match c:
            case Assign(target, expr):
                names.add(target)
                names |= free_vars(expr)
            case Seq(first, second):
                stack += [first, second]
            case If(cond, then, orelse):
                names |= free_vars(cond)
                stack += [then, orelse]
            case While(cond, body):
                names |= free_vars(cond)
                stack.append(body)
            case Assume(formula) | Assert(formula):
                names |= free_vars(formula)
    return frozenset(names)


def negate(b: BoolExpr) -> BoolExpr:
    """Negation with double negation removed, so ``negate(negate(b)) == b``
    for any ``b`` that is not itself a double negation."""
    if isinstance(b, Not):
        return b.arg
    return Not(b)


def _collect(c: Cmd, exprs: set, conds: set, extra: set):
    def add_expr(e):
        exprs.add(e)
        if isinstance(e, BoolVal):
            add_cond(e.cond)

    def add_cond(b):
        conds.add(b)
        if isinstance(b, (Lt, Eq)):
            add_expr(b.left)
            add_expr(b.right)

    stack = [c]
    while stack:
        c = stack.pop()
        match c:
            case Assign(target, expr):
                exprs.add(Var(target))
                add_expr(expr)
            case Seq(first, second):
                stack += [first, second]
            case If(cond, then, orelse):
                add_cond(cond)
                exprs.add(BoolVal(cond))
                stack += [then, orelse]
            case While(cond, body):
                add_cond(cond)
                exprs.add(BoolVal(cond))
                stack.append(body)
            case Assume(formula) | Assert(formula):
                for f in formula:
                    extra.add(f)
                    match f:
                        case Agree(e):
                            add_expr(e)
                        case Both(b):
                            add_cond(b)
                        case CondAgree(b, e):
                            add_cond(b)
                            add_expr(e)


def collect_lattice(c: Cmd) -> frozenset:
    """Finite formula carrier for monitoring ``c``.

    Holds ``A e``, ``B b`` and ``B b => A e`` for the expressions and guards
    of ``c``, ``A x`` for every variable, every annotation formula, and is
    closed under negating the boolean part of ``B`` formulas.
    """
    exprs, conds, extra = set(), set(), set()
    _collect(c, exprs, conds, extra)
    exprs |= {Var(x) for x in program_vars(c)}
    for f in extra:
        if isinstance(f, (Both, CondAgree)):
            conds.add(f.cond)
    # close the guard set under negation
    frontier = list(conds)
    while frontier:
        n = negate(frontier.pop())
        if n not in conds:
            conds.add(n)
            frontier.append(n)
    lattice = set(extra)
    lattice |= {Agree(e) for e in exprs}
    lattice |= {Both(b) for b in conds}
    lattice |= {CondAgree(b, e) for b in conds for e in exprs}
    return frozenset(lattice)
