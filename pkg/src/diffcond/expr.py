"""Expression trees for a small integer language.

Values are unbounded integers.  Division and modulo truncate toward zero
(C semantics); a zero divisor does not produce a value but makes the
evaluation "blocked", and callers treat the enclosing operation as not
executable in that state.  Boolean && and || short-circuit, so a blocked
subexpression that is never reached does not block the result.

This module also hosts the tokenizer shared by the statement parser and
by the textual operation format used in serialized automata.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from typing import Iterator, Mapping, Union

ARITH_OPS = ("+", "-", "*", "/", "%")
CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")

# precedence for printing and parsing; unary operators bind tightest
_PREC = {
    "||": 1,
    "&&": 2,
    "<": 3, "<=": 3, ">": 3, ">=": 3, "==": 3, "!=": 3,
    "+": 4, "-": 4,
    "*": 5, "/": 5, "%": 5,
}
_UNARY_PREC = 6

_NEGATED_CMP = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}


class EvalBlocked(Exception):
    """Evaluation hit a division or modulo by zero."""


class SourceError(Exception):
    """Lexical or syntactic problem, with source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True, slots=True)
class Int:
    value: int


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True, slots=True)
class Arith:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Cmp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True, slots=True)
class Bool:
    value: bool


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True, slots=True)
class Logic:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Int, Var, Neg, Arith, Cmp, Bool, Not, Logic]


def trunc_div(a: int, b: int) -> int:
    """Integer division truncating toward zero; blocked on b == 0."""
    if b == 0:
        raise EvalBlocked("division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def trunc_mod(a: int, b: int) -> int:
    """Remainder matching trunc_div: a == b * trunc_div(a, b) + result."""
    if b == 0:
        raise EvalBlocked("modulo by zero")
    return a - b * trunc_div(a, b)


def evaluate(e: Expr, state: Mapping[str, int]):
    """Evaluate e in state (missing variables read as 0).

    Returns an int for arithmetic and a bool for boolean expressions.
    Raises EvalBlocked when a reached divisor is zero.
    """
    if isinstance(e, Var):
        return state.get(e.name, 0)
    if isinstance(e, Int):
        return e.value
    if isinstance(e, Cmp):
        a = evaluate(e.left, state)
        b = evaluate(e.right, state)
        op = e.op
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if op == "==":
            return a == b
        return a != b
    if isinstance(e, Arith):
        a = evaluate(e.left, state)
        b = evaluate(e.right, state)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return trunc_div(a, b)
        return trunc_mod(a, b)
    if isinstance(e, Neg):
        return -evaluate(e.operand, state)
    if isinstance(e, Bool):
        return e.value
    if isinstance(e, Not):
        return not evaluate(e.operand, state)
    if isinstance(e, Logic):
        a = evaluate(e.left, state)
        if e.op == "&&":
            return evaluate(e.right, state) if a else False
        return True if a else evaluate(e.right, state)
    raise TypeError(f"not an expression: {e!r}")


@cache
def free_vars(e: Expr) -> frozenset[str]:
    """Syntactic set of variable names occurring in e."""
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (Int, Bool)):
        return frozenset()
    if isinstance(e, (Neg, Not)):
        return free_vars(e.operand)
    return free_vars(e.left) | free_vars(e.right)


def walk(e: Expr) -> Iterator[Expr]:
    """Yield e and every subexpression."""
    yield e
    if isinstance(e, (Neg, Not)):
        yield from walk(e.operand)
    elif isinstance(e, (Arith, Cmp, Logic)):
        yield from walk(e.left)
        yield from walk(e.right)


def const_value(e: Expr):
    """Value of a variable-free expression, or None if it has variables
    or its evaluation blocks."""
    if free_vars(e):
        return None
    try:
        return evaluate(e, {})
    except EvalBlocked:
        return None


def always_evaluates(e: Expr) -> bool:
    """True when evaluation of e cannot block in any state: every divisor
    is a variable-free expression with a nonzero value."""
    if isinstance(e, (Int, Var, Bool)):
        return True
    if isinstance(e, (Neg, Not)):
        return always_evaluates(e.operand)
    if isinstance(e, (Cmp, Logic)):
        return always_evaluates(e.left) and always_evaluates(e.right)
    if isinstance(e, Arith):
        if not (always_evaluates(e.left) and always_evaluates(e.right)):
            return False
        if e.op in ("/", "%"):
            d = const_value(e.right)
            return isinstance(d, int) and d != 0
        return True
    raise TypeError(f"not an expression: {e!r}")


def divisor_reads(e: Expr) -> frozenset[str]:
    """Variables read by some division or modulo divisor inside e."""
    acc: set[str] = set()
    for sub in walk(e):
        if isinstance(sub, Arith) and sub.op in ("/", "%"):
            acc |= free_vars(sub.right)
    return frozenset(acc)


def normalize(e: Expr) -> Expr:
    """Push every ! down to comparison or constant leaves.

    Comparisons themselves are leaves here; their arithmetic children are
    left untouched.  normalize is idempotent, and on normalized input
    negate yields the normalized complement.
    """
    if isinstance(e, Not):
        return negate(e.operand)
    if isinstance(e, Logic):
        return Logic(e.op, normalize(e.left), normalize(e.right))
    return e


def negate(e: Expr) -> Expr:
    """Normalized negation of a boolean expression."""
    if isinstance(e, Bool):
        return Bool(not e.value)
    if isinstance(e, Not):
        return normalize(e.operand)
    if isinstance(e, Cmp):
        return Cmp(_NEGATED_CMP[e.op], e.left, e.right)
    if isinstance(e, Logic):
        flipped = "||" if e.op == "&&" else "&&"
        return Logic(flipped, negate(e.left), negate(e.right))
    raise TypeError(f"not a boolean expression: {e!r}")


def conjuncts(e: Expr) -> Iterator[Expr]:
    """Flatten a chain of && into its conjuncts."""
    if isinstance(e, Logic) and e.op == "&&":
        yield from conjuncts(e.left)
        yield from conjuncts(e.right)
    else:
        yield e


def pretty(e: Expr) -> str:
    """Render e; parse_bexpr/parse_aexpr invert this rendering."""
    return _render(e, 0)


def _render(e: Expr, parent_prec: int) -> str:
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, Neg):
        return "-" + _render(e.operand, _UNARY_PREC)
    if isinstance(e, Not):
        return "!" + _render(e.operand, _UNARY_PREC)
    prec = _PREC[e.op]
    # left associativity: the right child needs strictly higher binding
    text = f"{_render(e.left, prec)} {e.op} {_render(e.right, prec + 1)}"
    return f"({text})" if prec < parent_prec else text


# ---------------------------------------------------------------------------
# tokenizer and expression parsing


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "int" | "ident" | "sym" | "eof"
    text: str
    line: int
    col: int


KEYWORDS = frozenset(("if", "else", "while", "assert", "error", "true", "false"))

_TOKEN_RE = re.compile(
    r"""(?P<skip>\s+|//[^\n]*)
      | (?P<int>\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<sym>&&|\|\||==|!=|<=|>=|[-+*/%<>=!;(){}])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens; a final eof token is appended."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SourceError(f"unknown character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind != "skip":
            tokens.append(Token(kind, value, line, m.start() - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    """Token cursor with backtracking support for the parsers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        t = self.tokens[self.index]
        if t.kind != "eof":
            self.index += 1
        return t

    def at_sym(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == text

    def at_word(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == text

    def expect_sym(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "sym" or t.text != text:
            raise SourceError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def error(self, message: str):
        t = self.peek()
        raise SourceError(message, t.line, t.col)


def parse_aexpr(ts: TokenStream) -> Expr:
    """additive := multiplicative (("+" | "-") multiplicative)*"""
    e = _parse_mult(ts)
    while ts.at_sym("+") or ts.at_sym("-"):
        op = ts.next().text
        e = Arith(op, e, _parse_mult(ts))
    return e


def _parse_mult(ts: TokenStream) -> Expr:
    e = _parse_unary(ts)
    while ts.at_sym("*") or ts.at_sym("/") or ts.at_sym("%"):
        op = ts.next().text
        e = Arith(op, e, _parse_unary(ts))
    return e


def _parse_unary(ts: TokenStream) -> Expr:
    if ts.at_sym("-"):
        ts.next()
        return Neg(_parse_unary(ts))
    t = ts.peek()
    if t.kind == "int":
        ts.next()
        return Int(int(t.text))
    if t.kind == "ident":
        if t.text in KEYWORDS:
            ts.error(f"keyword {t.text!r} is not a value")
        ts.next()
        return Var(t.text)
    if ts.at_sym("("):
        ts.next()
        e = parse_aexpr(ts)
        ts.expect_sym(")")
        return e
    ts.error("expected an arithmetic expression")


def parse_bexpr(ts: TokenStream) -> Expr:
    """disjunction := conjunction ("||" conjunction)*"""
    e = _parse_band(ts)
    while ts.at_sym("||"):
        ts.next()
        e = Logic("||", e, _parse_band(ts))
    return e


def _parse_band(ts: TokenStream) -> Expr:
    e = _parse_bnot(ts)
    while ts.at_sym("&&"):
        ts.next()
        e = Logic("&&", e, _parse_bnot(ts))
    return e


def _parse_bnot(ts: TokenStream) -> Expr:
    if ts.at_sym("!"):
        ts.next()
        return Not(_parse_bnot(ts))
    return _parse_batom(ts)


def _parse_batom(ts: TokenStream) -> Expr:
    if ts.at_word("true"):
        ts.next()
        return Bool(True)
    if ts.at_word("false"):
        ts.next()
        return Bool(False)
    # A "(" may open a parenthesized boolean or the left arithmetic side
    # of a comparison; try the comparison first and backtrack on failure.
    save = ts.index
    try:
        left = parse_aexpr(ts)
        t = ts.peek()
        if t.kind == "sym" and t.text in CMP_OPS:
            ts.next()
            return Cmp(t.text, left, parse_aexpr(ts))
        ts.error("expected a comparison operator")
    except SourceError:
        ts.index = save
        if ts.at_sym("("):
            ts.next()
            e = parse_bexpr(ts)
            ts.expect_sym(")")
            return e
        raise


def parse_aexpr_text(text: str) -> Expr:
    ts = TokenStream(tokenize(text))
    e = parse_aexpr(ts)
    if ts.peek().kind != "eof":
        ts.error("trailing input after expression")
    return e


def parse_bexpr_text(text: str) -> Expr:
    ts = TokenStream(tokenize(text))
    e = parse_bexpr(ts)
    if ts.peek().kind != "eof":
        ts.error("trailing input after expression")
    return e
