"""Bounded concrete execution: the ground-truth engine.

Data states map variable names to unbounded integers; names not present
read as 0.  A deterministic CFA has exactly one maximal path per initial
state (asserted during enumeration).  Enumeration ranges input variables
over the integer box [-bound, bound] and cuts every path after `depth`
steps, flagging it truncated when it could have continued.

Division or modulo by zero blocks the path: the edge is treated as not
executable in that state, so the path simply ends there.  A truncated
path is treated as NOT reaching the error location, which can only
enlarge the reported regression-bug set; consumers that must not
over-approximate should raise `depth`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from . import expr as ex
from .cfa import CFA, Edge, read_set, write_set

DataState = dict[str, int]


@dataclass(frozen=True)
class OracleBounds:
    bound: int
    depth: int
    input_vars: tuple[str, ...] | None = None  # None: derive from the programs


@dataclass(frozen=True)
class ExecPath:
    locations: tuple[int, ...]
    edges: tuple[Edge, ...]
    states: tuple[DataState, ...]
    truncated: bool

    @property
    def initial_state(self) -> DataState:
        return self.states[0]

    @property
    def final_location(self) -> int:
        return self.locations[-1]


class NondeterministicExecution(Exception):
    """Two edges of the same location were executable in one state."""


def _enabled(cfa: CFA, loc: int, state: Mapping[str, int]):
    """The unique executable edge from loc in state, with the computed
    assignment value, or None when every edge is blocked or refuted."""
    found = None
    value = None
    for e in cfa.out_map.get(loc, ()):
        op = e.op
        try:
            v = ex.evaluate(op.expr, state)
        except ex.EvalBlocked:
            continue
        if op.kind == "assume" and not v:
            continue
        if found is not None:
            raise NondeterministicExecution(f"two executable edges at location {loc}")
        found = e
        value = v if op.kind == "assign" else None
    return None if found is None else (found, value)


def strongest_post(op, c: Mapping[str, int]) -> DataState | None:
    """Concrete successor state of executing op in c, or None when the
    operation is blocked or the assumption refuted."""
    try:
        v = ex.evaluate(op.expr, c)
    except ex.EvalBlocked:
        return None
    if op.kind == "assume":
        return dict(c) if v else None
    out = dict(c)
    out[op.target] = v
    return out


def run_path(cfa: CFA, init: Mapping[str, int], depth: int) -> ExecPath:
    """The unique maximal path from init, cut after depth steps."""
    loc = cfa.initial
    state: DataState = dict(init)
    locations = [loc]
    edges: list[Edge] = []
    states = [dict(state)]
    truncated = False
    while loc != cfa.error:
        nxt = _enabled(cfa, loc, state)
        if nxt is None:
            break
        if len(edges) == depth:
            truncated = True
            break
        e, value = nxt
        if value is not None:
            state[e.op.target] = value
        loc = e.dst
        edges.append(e)
        locations.append(loc)
        states.append(dict(state))
    return ExecPath(tuple(locations), tuple(edges), tuple(states), truncated)


def final_location(cfa: CFA, init: Mapping[str, int], depth: int) -> tuple[int, bool]:
    """Like run_path but returning only (final location, truncated)."""
    loc = cfa.initial
    state: DataState = dict(init)
    steps = 0
    while loc != cfa.error:
        nxt = _enabled(cfa, loc, state)
        if nxt is None:
            return loc, False
        if steps == depth:
            return loc, True
        e, value = nxt
        if value is not None:
            state[e.op.target] = value
        loc = e.dst
        steps += 1
    return loc, False


def reads_before_writing(cfa: CFA, var: str) -> bool:
    """True when some syntactic path reaches a read of var without
    passing a write to var first."""
    seen = {cfa.initial}
    work = [cfa.initial]
    while work:
        loc = work.pop()
        for e in cfa.out_map.get(loc, ()):
            if var in read_set(e.op):
                return True
            if var in write_set(e.op):
                continue
            if e.dst not in seen:
                seen.add(e.dst)
                work.append(e.dst)
    return False


def default_input_vars(cfas: Iterable[CFA]) -> tuple[str, ...]:
    """Variables read before written along some syntactic path of any of
    the programs; these act as the programs' inputs."""
    acc: set[str] = set()
    for c in cfas:
        for v in sorted(c.variables):
            if v not in acc and reads_before_writing(c, v):
                acc.add(v)
    return tuple(sorted(acc))


def input_states(input_vars: Sequence[str], bound: int) -> Iterator[DataState]:
    """All assignments of [-bound, bound] to the input variables, in
    ascending tuple order; other variables start at 0 implicitly."""
    names = list(input_vars)
    for values in itertools.product(range(-bound, bound + 1), repeat=len(names)):
        yield dict(zip(names, values))


def resolve_inputs(bounds: OracleBounds, cfas: Iterable[CFA]) -> tuple[str, ...]:
    if bounds.input_vars is not None:
        return tuple(bounds.input_vars)
    return default_input_vars(cfas)


def enumerate_paths(cfa: CFA, bounds: OracleBounds) -> list[ExecPath]:
    """The unique maximal path per enumerated initial state, in ascending
    input order."""
    inputs = resolve_inputs(bounds, (cfa,))
    return [run_path(cfa, init, bounds.depth) for init in input_states(inputs, bounds.bound)]


def error_paths(cfa: CFA, bounds: OracleBounds) -> list[ExecPath]:
    return [p for p in enumerate_paths(cfa, bounds) if p.final_location == cfa.error]


def regression_bug_paths(original: CFA, modified: CFA, bounds: OracleBounds) -> list[ExecPath]:
    """Error paths of the modified program whose initial state does not
    drive the original program into its error location."""
    inputs = resolve_inputs(bounds, (original, modified))
    out = []
    for init in input_states(inputs, bounds.bound):
        floc, _ = final_location(modified, init, bounds.depth)
        if floc != modified.error:
            continue
        oloc, _ = final_location(original, init, bounds.depth)
        if oloc == original.error:
            continue
        out.append(run_path(modified, init, bounds.depth))
    return out


def states_agree_except(c: Mapping[str, int], c2: Mapping[str, int], names: Iterable[str]) -> bool:
    """True when c and c2 give equal values to every variable outside names."""
    skip = set(names)
    for k in set(c) | set(c2):
        if k not in skip and c.get(k, 0) != c2.get(k, 0):
            return False
    return True
