"""Residual program construction.

The residual of a program and a condition is the product CFA containing
exactly the paths the condition does not cover: following an edge whose
condition successor accepts means the path prefix is covered, so the
edge is dropped; an edge the condition cannot follow detaches the run,
which then never accepts.  The product tracks the set of condition
states reachable on the consumed prefix, so nondeterministic conditions
determinize on the fly and a detached run is simply the empty set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cfa import CFA, Edge, edge_key
from .condition import (
    Condition,
    advance_frontier,
    canonical_state_ids,
    check_vocabulary,
    transition_index,
)


@dataclass(frozen=True)
class MapRow:
    residual: int  # residual location
    mod: int | None  # modified-program location
    cond: tuple[int, ...] | None  # condition state ids, None for the error stub


@dataclass(frozen=True)
class ResidualCFA:
    cfa: CFA
    mapping: tuple[MapRow, ...]


def reduce(modified: CFA, a: Condition) -> ResidualCFA:
    problems = check_vocabulary(a, modified)
    if problems:
        raise ValueError("; ".join(problems))
    if modified.initial == modified.error:
        c = CFA.make((0,), 0, 0, ())
        return ResidualCFA(c, (MapRow(0, modified.initial, None),))

    state_ids = canonical_state_ids(a)
    index = transition_index(a)

    def cond_ids(frontier: frozenset) -> tuple[int, ...]:
        return tuple(sorted(state_ids[s] for s in frontier))

    start_frontier = frozenset((a.initial,))
    start = (modified.initial, start_frontier)
    locations: dict[tuple, int] = {start: 0}
    rows = [MapRow(0, modified.initial, cond_ids(start_frontier))]
    raw_edges: list[tuple[int, object, int | None]] = []  # None dst: error stub

    if not (start_frontier & a.accepting):  # otherwise everything is covered
        queue = deque((start,))
        while queue:
            loc, frontier = queue.popleft()
            src_id = locations[(loc, frontier)]
            for g in sorted(modified.out_edges(loc), key=edge_key):
                succ_frontier = advance_frontier(frontier, g, index)
                if succ_frontier & a.accepting:
                    continue  # covered continuation: pruned
                if g.dst == modified.error:
                    raw_edges.append((src_id, g.op, None))
                    continue
                succ = (g.dst, succ_frontier)
                if succ not in locations:
                    locations[succ] = len(locations)
                    rows.append(MapRow(locations[succ], g.dst, cond_ids(succ_frontier)))
                    queue.append(succ)
                raw_edges.append((src_id, g.op, locations[succ]))

    # all (error location, _) product states collapse into one stub,
    # present even when unreachable
    err = len(locations)
    rows.append(MapRow(err, modified.error, None))
    edges = [Edge(s, op, err if d is None else d) for (s, op, d) in raw_edges]
    c = CFA.make(range(err + 1), 0, err, edges)
    return ResidualCFA(c, tuple(rows))


def mapping_json_obj(r: ResidualCFA) -> list[dict]:
    return [
        {
            "residual": row.residual,
            "mod": row.mod,
            "cond": None if row.cond is None else list(row.cond),
        }
        for row in r.mapping
    ]
