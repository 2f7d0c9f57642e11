"""Parser and CFA compiler for the input language.

Statements: assignment, if with optional else, while, assert, and the
error marker `error;`.  Compilation discipline: one edge per assignment,
two complementary assume edges per branch or assertion (the failing
assertion branch targets the error location), and a single `assume true`
edge to the error location for `error;`.  Locations are numbered in
program order starting at 0; the error location is numbered last.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cfa
from . import expr as ex


@dataclass(frozen=True)
class Assign:
    name: str
    rhs: ex.Expr


@dataclass(frozen=True)
class If:
    cond: ex.Expr
    then: tuple
    orelse: tuple = ()


@dataclass(frozen=True)
class While:
    cond: ex.Expr
    body: tuple


@dataclass(frozen=True)
class Assert:
    cond: ex.Expr


@dataclass(frozen=True)
class ErrorStmt:
    pass


@dataclass(frozen=True)
class Program:
    stmts: tuple


Stmt = Assign | If | While | Assert | ErrorStmt


def parse_program(source_text: str) -> Program:
    """Parse source text into a Program; raises SourceError with the
    position of the first offending token."""
    ts = ex.TokenStream(ex.tokenize(source_text))
    stmts = _parse_stmts(ts, top_level=True)
    return Program(tuple(stmts))


def _parse_stmts(ts: ex.TokenStream, top_level: bool) -> list[Stmt]:
    out: list[Stmt] = []
    while True:
        t = ts.peek()
        if t.kind == "eof":
            if not top_level:
                ts.error("unbalanced block: missing '}'")
            return out
        if t.kind == "sym" and t.text == "}":
            if top_level:
                ts.error("unbalanced block: unexpected '}'")
            return out
        out.append(_parse_stmt(ts))


def _parse_stmt(ts: ex.TokenStream) -> Stmt:
    t = ts.peek()
    if t.kind == "ident" and t.text == "if":
        ts.next()
        ts.expect_sym("(")
        cond = ex.parse_bexpr(ts)
        ts.expect_sym(")")
        then = _parse_block(ts)
        orelse: tuple = ()
        if ts.at_word("else"):
            ts.next()
            orelse = _parse_block(ts)
        return If(cond, then, orelse)
    if t.kind == "ident" and t.text == "while":
        ts.next()
        ts.expect_sym("(")
        cond = ex.parse_bexpr(ts)
        ts.expect_sym(")")
        return While(cond, _parse_block(ts))
    if t.kind == "ident" and t.text == "assert":
        ts.next()
        ts.expect_sym("(")
        cond = ex.parse_bexpr(ts)
        ts.expect_sym(")")
        ts.expect_sym(";")
        return Assert(cond)
    if t.kind == "ident" and t.text == "error":
        ts.next()
        ts.expect_sym(";")
        return ErrorStmt()
    if t.kind == "ident" and t.text not in ex.KEYWORDS:
        ts.next()
        ts.expect_sym("=")
        rhs = ex.parse_aexpr(ts)
        ts.expect_sym(";")
        return Assign(t.text, rhs)
    ts.error(f"expected a statement, found {t.text or 'end of input'!r}")


def _parse_block(ts: ex.TokenStream) -> tuple:
    ts.expect_sym("{")
    stmts = _parse_stmts(ts, top_level=False)
    ts.expect_sym("}")
    return tuple(stmts)


def pretty_print(program: Program) -> str:
    """Render a Program; parse_program inverts this rendering."""
    lines: list[str] = []
    _emit(program.stmts, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def _emit(stmts: tuple, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    for s in stmts:
        if isinstance(s, Assign):
            lines.append(f"{pad}{s.name} = {ex.pretty(s.rhs)};")
        elif isinstance(s, Assert):
            lines.append(f"{pad}assert({ex.pretty(s.cond)});")
        elif isinstance(s, ErrorStmt):
            lines.append(f"{pad}error;")
        elif isinstance(s, If):
            lines.append(f"{pad}if ({ex.pretty(s.cond)}) {{")
            _emit(s.then, depth + 1, lines)
            if s.orelse:
                lines.append(f"{pad}}} else {{")
                _emit(s.orelse, depth + 1, lines)
            lines.append(f"{pad}}}")
        elif isinstance(s, While):
            lines.append(f"{pad}while ({ex.pretty(s.cond)}) {{")
            _emit(s.body, depth + 1, lines)
            lines.append(f"{pad}}}")
        else:
            raise TypeError(f"not a statement: {s!r}")


_ERR = -1  # temporary id of the error location during compilation


@dataclass
class _Builder:
    next_id: int = 0
    edges: list = field(default_factory=list)  # (src, Operation, dst) in creation order
    alias: dict = field(default_factory=dict)  # merged temporary ids

    def fresh(self) -> int:
        self.next_id += 1
        return self.next_id - 1

    def resolve(self, t: int) -> int:
        while t in self.alias:
            t = self.alias[t]
        return t

    def merge(self, a: int, b: int) -> None:
        ra, rb = self.resolve(a), self.resolve(b)
        if ra != rb:
            self.alias[ra] = rb

    def edge(self, src: int, op: cfa.Operation, dst: int) -> None:
        self.edges.append((src, op, dst))

    def compile_block(self, stmts: tuple, cur: int) -> int:
        for s in stmts:
            cur = self.compile_stmt(s, cur)
        return cur

    def compile_stmt(self, s: Stmt, cur: int) -> int:
        if isinstance(s, Assign):
            nxt = self.fresh()
            self.edge(cur, cfa.assign(s.name, s.rhs), nxt)
            return nxt
        if isinstance(s, Assert):
            nxt = self.fresh()
            self.edge(cur, cfa.assume(s.cond), nxt)
            self.edge(cur, cfa.assume(ex.Not(s.cond)), _ERR)
            return nxt
        if isinstance(s, ErrorStmt):
            self.edge(cur, cfa.assume(ex.Bool(True)), _ERR)
            # continuation for any (unreachable) trailing statements
            return self.fresh()
        if isinstance(s, If):
            then_in = self.fresh()
            self.edge(cur, cfa.assume(s.cond), then_in)
            then_out = self.compile_block(s.then, then_in)
            else_in = self.fresh()
            self.edge(cur, cfa.assume(ex.Not(s.cond)), else_in)
            else_out = self.compile_block(s.orelse, else_in)
            self.merge(else_out, then_out)
            return self.resolve(then_out)
        if isinstance(s, While):
            body_in = self.fresh()
            self.edge(cur, cfa.assume(s.cond), body_in)
            body_out = self.compile_block(s.body, body_in)
            self.merge(body_out, cur)  # loop back to the head
            exit_ = self.fresh()
            self.edge(cur, cfa.assume(ex.Not(s.cond)), exit_)
            return exit_
        raise TypeError(f"not a statement: {s!r}")


def build_cfa(program: Program) -> cfa.CFA:
    b = _Builder()
    entry = b.fresh()
    b.compile_block(program.stmts, entry)
    resolved = [(b.resolve(s), op, b.resolve(d)) for (s, op, d) in b.edges]

    # program-order numbering: entry first, then first appearance along
    # the edge creation order; the error location is numbered last
    number: dict[int, int] = {b.resolve(entry): 0}
    for s, _op, d in resolved:
        for t in (s, d):
            if t != _ERR and t not in number:
                number[t] = len(number)
    err_id = len(number)
    number[_ERR] = err_id
    edges = [cfa.Edge(number[s], op, number[d]) for (s, op, d) in resolved]
    return cfa.CFA.make(range(err_id + 1), 0, err_id, edges)


def compile_source(source_text: str) -> cfa.CFA:
    return build_cfa(parse_program(source_text))
