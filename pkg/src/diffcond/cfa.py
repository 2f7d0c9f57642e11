"""Control-flow automata: locations and edges labeled with assume or
assignment operations, a distinguished initial location, and a
distinguished error location encoding the safety property.

A CFA is deterministic when any two distinct edges leaving the same
location are assumes whose conditions are complementary after
normalization.  Everything downstream (execution, differencing,
condition generation) relies on that shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from . import expr as ex


@dataclass(frozen=True, slots=True)
class Operation:
    kind: str  # "assume" | "assign"
    target: str | None  # assigned variable, None for assumes
    expr: ex.Expr  # condition (normalized) or right-hand side


def assume(cond: ex.Expr) -> Operation:
    """Assume operation; the condition is stored normalized so that
    complementary pairs are recognizable syntactically."""
    return Operation("assume", None, ex.normalize(cond))


def assign(target: str, rhs: ex.Expr) -> Operation:
    return Operation("assign", target, rhs)


def op_text(op: Operation) -> str:
    """Textual form used in serialized automata and DOT labels."""
    if op.kind == "assign":
        return f"{op.target} = {ex.pretty(op.expr)}"
    return ex.pretty(op.expr)


def parse_operation(text: str) -> Operation:
    """Invert op_text: `x = e` is an assignment (a lone `=`, not `==`),
    anything else is an assume."""
    tokens = ex.tokenize(text)
    if (
        len(tokens) >= 3
        and tokens[0].kind == "ident"
        and tokens[0].text not in ex.KEYWORDS
        and tokens[1].kind == "sym"
        and tokens[1].text == "="
    ):
        ts = ex.TokenStream(tokens)
        target = ts.next().text
        ts.next()
        rhs = ex.parse_aexpr(ts)
        if ts.peek().kind != "eof":
            ts.error("trailing input after assignment")
        return assign(target, rhs)
    return assume(ex.parse_bexpr_text(text))


def read_set(op: Operation) -> frozenset[str]:
    """Variables needed to execute op (syntactic overapproximation)."""
    return ex.free_vars(op.expr)


def write_set(op: Operation) -> frozenset[str]:
    """Variables written by op: the target for assignments, none for assumes."""
    if op.kind == "assign":
        return frozenset((op.target,))
    return frozenset()


@dataclass(frozen=True, slots=True)
class Edge:
    src: int
    op: Operation
    dst: int


def edge_key(e: Edge) -> tuple:
    return (e.src, e.dst, e.op.kind, op_text(e.op))


@dataclass(frozen=True)
class CFA:
    locations: tuple[int, ...]
    initial: int
    error: int
    edges: tuple[Edge, ...]

    @classmethod
    def make(cls, locations: Iterable[int], initial: int, error: int, edges: Iterable[Edge]) -> "CFA":
        """Canonicalize ordering and validate the structural invariants."""
        locs = tuple(sorted(set(locations)))
        uniq = tuple(sorted(set(edges), key=edge_key))
        c = cls(locs, initial, error, uniq)
        problems = c.structural_problems()
        if problems:
            raise ValueError("; ".join(problems))
        return c

    def structural_problems(self) -> list[str]:
        out = []
        locs = set(self.locations)
        if self.initial not in locs:
            out.append(f"initial location {self.initial} not in locations")
        if self.error not in locs:
            out.append(f"error location {self.error} not in locations")
        for e in self.edges:
            if e.src not in locs or e.dst not in locs:
                out.append(f"edge {op_text(e.op)!r} has endpoint outside locations: {e.src}->{e.dst}")
            if e.src == self.error:
                out.append(f"error location has outgoing edge {op_text(e.op)!r}")
        return out

    @cached_property
    def out_map(self) -> Mapping[int, tuple[Edge, ...]]:
        m: dict[int, list[Edge]] = {}
        for e in self.edges:
            m.setdefault(e.src, []).append(e)
        return {loc: tuple(es) for loc, es in m.items()}

    def out_edges(self, loc: int) -> tuple[Edge, ...]:
        return self.out_map.get(loc, ())

    def find_edge(self, loc: int, op: Operation) -> Edge | None:
        """The edge from loc carrying exactly this operation, if any."""
        for e in self.out_edges(loc):
            if e.op == op:
                return e
        return None

    @cached_property
    def variables(self) -> frozenset[str]:
        acc: set[str] = set()
        for e in self.edges:
            acc |= read_set(e.op) | write_set(e.op)
        return frozenset(acc)


def check_deterministic(cfa: CFA) -> list[str]:
    """Empty list when every same-source edge pair consists of two
    complementary assumes; otherwise one message per offence."""
    out = []
    for loc in cfa.locations:
        edges = cfa.out_edges(loc)
        if len(edges) <= 1:
            continue
        if len(edges) > 2:
            out.append(f"location {loc} has {len(edges)} outgoing edges")
            continue
        a, b = edges
        if a.op.kind != "assume" or b.op.kind != "assume":
            out.append(
                f"location {loc} has parallel edges {op_text(a.op)!r} and {op_text(b.op)!r}"
            )
        elif a.op.expr != ex.negate(b.op.expr):
            out.append(
                f"location {loc} edges {op_text(a.op)!r} and {op_text(b.op)!r} are not complementary"
            )
    return out


def to_json_obj(cfa: CFA) -> dict:
    return {
        "locations": list(cfa.locations),
        "initial": cfa.initial,
        "error": cfa.error,
        "edges": [{"src": e.src, "op": op_text(e.op), "dst": e.dst} for e in cfa.edges],
    }


def from_json_obj(obj: dict) -> CFA:
    try:
        locations = [int(x) for x in obj["locations"]]
        initial = int(obj["initial"])
        error = int(obj["error"])
        raw_edges = obj["edges"]
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed automaton object: {err}") from err
    edges = []
    for item in raw_edges:
        try:
            edges.append(Edge(int(item["src"]), parse_operation(item["op"]), int(item["dst"])))
        except (KeyError, TypeError, ValueError, ex.SourceError) as err:
            raise ValueError(f"malformed edge {item!r}: {err}") from err
    return CFA.make(locations, initial, error, edges)


def to_dot(cfa: CFA, name: str = "cfa") -> str:
    """GraphViz rendering; the error location is double-circled."""
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for loc in cfa.locations:
        attrs = f'label="{loc}"'
        if loc == cfa.error:
            attrs += ", shape=doublecircle"
        lines.append(f"  n{loc} [{attrs}];")
    for e in cfa.edges:
        label = op_text(e.op).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{e.src} -> n{e.dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
