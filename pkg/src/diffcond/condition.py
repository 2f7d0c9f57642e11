"""Condition automata over modified-program CFA edges.

A condition's accepting states mark path prefixes that are already known
safe: a path some of whose prefixes drives the automaton into an
accepting state is covered and need not be verified again.  No
transition leaves an accepting state.

Generation walks the difference graph backward from the root and the
bug indicator nodes; everything outside that closure is behaviorally
safe, so the frontier into it becomes the accepting set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from . import expr as ex
from .cfa import CFA, Edge, edge_key, op_text, parse_operation
from .diffgraph import DifferenceGraph, node_key

State = Hashable


@dataclass(frozen=True)
class Condition:
    states: frozenset
    initial: State
    accepting: frozenset
    transitions: tuple  # (state, Edge, state) triples


def trivial_condition() -> Condition:
    """Covers nothing; conditional verification with it is plain bounded
    verification."""
    return Condition(frozenset((0,)), 0, frozenset(), ())


def generate_condition(dg: DifferenceGraph) -> Condition:
    if dg.root not in dg.nodes:
        raise ValueError("difference graph has no root node")
    preds: dict = {}
    for e in dg.edges:
        preds.setdefault(e.dst, []).append(e.src)
    closure = set()
    work = [dg.root, *dg.delta]
    while work:
        n = work.pop()
        if n in closure:
            continue
        closure.add(n)
        work.extend(preds.get(n, ()))
    accepting = set()
    transitions = []
    for e in dg.edges:
        if e.src not in closure:
            continue
        if e.dst not in closure:
            accepting.add(e.dst)
        transitions.append((e.src, e.label, e.dst))
    return Condition(
        states=frozenset(closure) | frozenset(accepting),
        initial=dg.root,
        accepting=frozenset(accepting),
        transitions=tuple(transitions),
    )


def transition_index(a: Condition) -> Mapping[tuple, tuple]:
    """(state, edge) -> target states; multiple targets only for
    hand-built nondeterministic conditions."""
    m: dict[tuple, list] = {}
    for src, label, dst in a.transitions:
        m.setdefault((src, label), []).append(dst)
    return {k: tuple(v) for k, v in m.items()}


def advance_frontier(frontier: frozenset, label: Edge, index: Mapping[tuple, tuple]) -> frozenset:
    out = set()
    for st in frontier:
        out.update(index.get((st, label), ()))
    return frozenset(out)


def covers(a: Condition, path) -> bool:
    """True when some run of a over some prefix of the path's edges ends
    accepting; the empty prefix counts when the initial state accepts."""
    if a.initial in a.accepting:
        return True
    index = transition_index(a)
    frontier = frozenset((a.initial,))
    for g in path.edges:
        frontier = advance_frontier(frontier, g, index)
        if frontier & a.accepting:
            return True
        if not frontier:
            return False
    return False


def validate_condition(a: Condition) -> list[str]:
    """Well-formedness report; empty when the condition is valid."""
    out = []
    if a.initial not in a.states:
        out.append("initial state is not a state")
    if not a.accepting <= a.states:
        out.append("accepting set contains non-states")
    for src, label, dst in a.transitions:
        if src not in a.states or dst not in a.states:
            out.append(f"transition endpoint outside states: {src} -> {dst}")
        if src in a.accepting:
            out.append(f"transition leaves accepting state {src} on {op_text(label.op)!r}")
    return out


def _state_order_key(s: State):
    if isinstance(s, int):
        return (s, 0, 0)
    return node_key(s)  # difference graph nodes


def canonical_state_ids(a: Condition) -> dict:
    """Breadth-first ids from the initial state, label-sorted; states the
    transitions never reach follow in a fixed order."""
    succ: dict = {}
    for src, label, dst in a.transitions:
        succ.setdefault(src, []).append((edge_key(label), dst))
    ids: dict = {}
    queue = deque((a.initial,))
    while queue:
        s = queue.popleft()
        if s in ids:
            continue
        ids[s] = len(ids)
        for _key, dst in sorted(succ.get(s, ()), key=lambda kv: (kv[0], _state_order_key(kv[1]))):
            if dst not in ids:
                queue.append(dst)
    for s in sorted(a.states, key=_state_order_key):
        if s not in ids:
            ids[s] = len(ids)
    return ids


def to_json_obj(a: Condition) -> dict:
    ids = canonical_state_ids(a)
    transitions = [
        {
            "src": ids[src],
            "edge": {"src": label.src, "op": op_text(label.op), "dst": label.dst},
            "dst": ids[dst],
            "assumption": None,
        }
        for src, label, dst in a.transitions
    ]
    transitions.sort(
        key=lambda t: (t["src"], t["edge"]["src"], t["edge"]["op"], t["edge"]["dst"], t["dst"])
    )
    return {
        "states": sorted(ids.values()),
        "initial": ids[a.initial],
        "accepting": sorted(ids[s] for s in a.accepting),
        "transitions": transitions,
    }


def from_json_obj(obj: dict) -> Condition:
    try:
        states = frozenset(int(s) for s in obj["states"])
        initial = int(obj["initial"])
        accepting = frozenset(int(s) for s in obj["accepting"])
        raw = obj["transitions"]
    except (KeyError, TypeError, ValueError) as err:
        raise ValueError(f"malformed condition object: {err}") from err
    transitions = []
    for item in raw:
        try:
            edge = Edge(
                int(item["edge"]["src"]),
                parse_operation(item["edge"]["op"]),
                int(item["edge"]["dst"]),
            )
            transitions.append((int(item["src"]), edge, int(item["dst"])))
        except (KeyError, TypeError, ValueError, ex.SourceError) as err:
            raise ValueError(f"malformed transition {item!r}: {err}") from err
    a = Condition(states, initial, accepting, tuple(transitions))
    problems = validate_condition(a)
    if problems:
        raise ValueError("; ".join(problems))
    return a


def check_vocabulary(a: Condition, modified: CFA) -> list[str]:
    """Transitions must be labeled with edges of the program under
    verification; anything else is reported."""
    known = set(modified.edges)
    out = []
    for _src, label, _dst in a.transitions:
        if label not in known:
            out.append(
                f"condition label {op_text(label.op)!r} ({label.src}->{label.dst})"
                " is not an edge of the program"
            )
    return out


def to_dot(a: Condition, name: str = "condition") -> str:
    """GraphViz rendering; accepting states are double-circled."""
    ids = canonical_state_ids(a)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for s in sorted(ids, key=lambda s: ids[s]):
        shape = ", shape=doublecircle" if s in a.accepting else ""
        lines.append(f'  n{ids[s]} [label="q{ids[s]}"{shape}];')
    for src, label, dst in a.transitions:
        text = op_text(label.op).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{ids[src]} -> n{ids[dst]} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
