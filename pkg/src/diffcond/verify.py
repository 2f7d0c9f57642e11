"""Conditional bounded verification.

Runs the bounded oracle over a program while tracking a coverage
condition alongside the execution: the moment the condition accepts the
consumed prefix the input is covered and exploration of it stops.  Only
uncovered runs that reach the error location count as alarms, so a
condition summarizing already-analyzed behavior focuses the verifier on
the remaining paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cfa import CFA
from .condition import Condition, advance_frontier, check_vocabulary, transition_index
from .oracle import (
    DataState,
    ExecPath,
    OracleBounds,
    _enabled,
    input_states,
    resolve_inputs,
    run_path,
)


@dataclass(frozen=True)
class Verdict:
    result: str  # "safe" or "alarm"
    alarms: tuple[tuple[DataState, ExecPath], ...]
    explored_paths: int
    covered_paths: int
    truncated: bool = field(default=False)

    def alarm_inputs(self) -> tuple[DataState, ...]:
        return tuple(state for state, _ in self.alarms)


def conditional_verify(
    cfa: CFA, a: Condition | None, bounds: OracleBounds
) -> Verdict:
    """Check ``cfa`` on all bounded inputs, skipping condition-covered runs.

    With ``a`` None every input is explored in full.  Each input is
    either covered or explored, and alarms are the explored runs ending
    at the error location.
    """
    if a is not None:
        problems = check_vocabulary(a, cfa)
        if problems:
            raise ValueError("; ".join(problems))
        index = transition_index(a)
        start_frontier = frozenset((a.initial,))
    names = resolve_inputs(bounds, (cfa,))

    alarms: list[tuple[DataState, ExecPath]] = []
    explored = 0
    covered = 0
    truncated = False
    for initial in input_states(names, bounds.bound):
        frontier = start_frontier if a is not None else frozenset()
        if a is not None and frontier & a.accepting:
            covered += 1  # accepted before consuming anything
            continue
        state = dict(initial)
        loc = cfa.initial
        steps = 0
        is_covered = False
        while loc != cfa.error:
            nxt = _enabled(cfa, loc, state)
            if nxt is None:
                break  # all outgoing edges refuted or blocked
            if steps == bounds.depth:
                truncated = True
                break
            edge, value = nxt
            if value is not None:
                state[edge.op.target] = value
            if a is not None:
                frontier = advance_frontier(frontier, edge, index)
            loc = edge.dst
            steps += 1
            if a is not None and frontier & a.accepting:
                is_covered = True
                break
        if is_covered:
            covered += 1
            continue
        explored += 1
        if loc == cfa.error:
            alarms.append((dict(initial), run_path(cfa, initial, bounds.depth)))

    result = "alarm" if alarms else "safe"
    return Verdict(result, tuple(alarms), explored, covered, truncated)
