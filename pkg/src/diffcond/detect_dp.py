"""Difference detector tracking data dependencies and the property.

Exploration aligns location pairs of the two programs while a map of
change-affected variables records where their data states may disagree.
Assignments advance in lockstep when the original has an identical one;
a new assignment stalls the original side.  Before matching an assume,
the original side first catches up over its pending assignment chain
(resynchronization), accumulating written variables into the difference
set.  A matched assume whose reads touch the difference set, or a
modified error location the original side cannot honestly follow, ends
in a regression bug indicator node.

Alignment steps claim that the original program can execute the same
input to the paired location.  Because a zero divisor blocks execution,
steps that would make the original evaluate a division whose outcome is
not forced by the modified run are downgraded: identical assignments
whose divisors read change-affected variables are treated as new
assignments, and resynchronization stops before an assignment whose
divisor is not a nonzero constant.  This costs precision only, never
soundness, and changes nothing for division-free programs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import expr as ex
from .cfa import CFA, Edge, check_deterministic, edge_key, read_set, write_set
from .diffgraph import DifferenceGraph, _GraphBuilder, aligned


@dataclass(frozen=True)
class DetectorConfig:
    align_same_write: bool = False  # align assignments writing the same variable set
    followup_error_search: bool = True  # accept error alignments the original provably reaches
    implication_matching: bool = True  # allow a more general original assume to match


def _interval_view(b: ex.Expr):
    """View b as a single-variable integer constraint (var, kind, c) with
    kind in le/ge/eq/ne, or None when it has another shape."""
    if not isinstance(b, ex.Cmp):
        return None
    left, right = b.left, b.right
    op = b.op
    if isinstance(right, ex.Var) and not isinstance(left, ex.Var):
        # mirror c <op> x into x <flipped op> c
        flipped = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}
        left, right, op = right, left, flipped[op]
    if not isinstance(left, ex.Var):
        return None
    c = ex.const_value(right)
    if not isinstance(c, int):
        return None
    if op == "<":
        return (left.name, "le", c - 1)
    if op == "<=":
        return (left.name, "le", c)
    if op == ">":
        return (left.name, "ge", c + 1)
    if op == ">=":
        return (left.name, "ge", c)
    if op == "==":
        return (left.name, "eq", c)
    return (left.name, "ne", c)


def _interval_subset(p, q) -> bool:
    """Set inclusion of the solution sets of two constraints on the same
    variable."""
    (kp, a), (kq, b) = p, q
    if kq == "le":
        return (kp == "le" and a <= b) or (kp == "eq" and a <= b)
    if kq == "ge":
        return (kp == "ge" and a >= b) or (kp == "eq" and a >= b)
    if kq == "eq":
        return kp == "eq" and a == b
    # kq == "ne"
    if kp == "eq":
        return a != b
    if kp == "le":
        return b > a
    if kp == "ge":
        return b < a
    return kp == "ne" and a == b


def implies(p: ex.Expr, q: ex.Expr) -> bool:
    """Sound, incomplete entailment check for normalized conditions:
    syntactic equality, single-variable interval inclusion, and conjunct
    subsumption (some conjunct of p already entails q)."""
    if p == q or q == ex.Bool(True):
        return True
    qv = _interval_view(q)
    for c in ex.conjuncts(p):
        if c == q:
            return True
        if qv is not None:
            cv = _interval_view(c)
            if cv is not None and cv[0] == qv[0] and _interval_subset(cv[1:], qv[1:]):
                return True
    return False


def _satisfiable(b: ex.Expr) -> bool:
    """False only when b provably holds in no state: the literal false or
    a variable-free condition that evaluates false or blocks."""
    if not ex.free_vars(b):
        return ex.const_value(b) is True
    return True


def assume_match(op_prime, candidates: Iterable[Edge], implication_matching: bool = True) -> Edge | None:
    """Pick the original assume edge justified by the modified assume:
    an identical condition always matches; with implication matching, a
    strictly more general original condition matches as long as the
    modified one is not provably unsatisfiable."""
    assert op_prime.kind == "assume"
    cands = sorted(candidates, key=edge_key)
    for e in cands:
        assert e.op.kind == "assume"
        if e.op.expr == op_prime.expr:
            return e
    if not implication_matching or not _satisfiable(op_prime.expr):
        return None
    for e in cands:
        if implies(op_prime.expr, e.op.expr):
            return e
    return None


def _resync(original: CFA, loc: int, vdiff: frozenset[str]) -> tuple[int, frozenset[str], bool]:
    """Catch the original side up over pending assignments before an
    assume is matched, accumulating written variables.

    Returns (stop location, accumulated set, clean).  clean is False when
    the chain was cut short: a location repeated (a pure-assignment
    cycle) or an assignment's divisor is not a nonzero constant, so its
    execution cannot be promised in every state.
    """
    acc = set(vdiff)
    seen = {loc}
    while loc != original.error:
        outs = original.out_map.get(loc, ())
        if not outs or outs[0].op.kind == "assume":
            break  # nothing pending, or an assume-bearing location
        e = outs[0]  # a deterministic CFA has a lone assignment edge here
        if not ex.always_evaluates(e.op.expr):
            return loc, frozenset(acc), False
        if e.dst in seen:
            return loc, frozenset(acc), False
        acc |= write_set(e.op)
        seen.add(e.dst)
        loc = e.dst
    return loc, frozenset(acc), True


def _same_write_assignment(original: CFA, loc: int, op_prime) -> Edge | None:
    """The original assignment at loc writing exactly the variables the
    modified one writes, provided its execution cannot block."""
    for e in original.out_map.get(loc, ()):
        if (
            e.op.kind == "assign"
            and write_set(e.op) == write_set(op_prime)
            and ex.always_evaluates(e.op.expr)
        ):
            return e
    return None


def diff_dp(original: CFA, modified: CFA, config: DetectorConfig | None = None) -> DifferenceGraph:
    cfg = config or DetectorConfig()
    for c, name in ((original, "original"), (modified, "modified")):
        problems = check_deterministic(c)
        if problems:
            raise ValueError(f"{name} program is not deterministic: {problems[0]}")
    b = _GraphBuilder(original, modified, followup_error_search=cfg.followup_error_search)
    while (node := b.pop()) is not None:
        mvars = b.visited[node]
        for g in modified.out_edges(node.mod):
            op_p = g.op
            if op_p.kind == "assign":
                counterpart = original.find_edge(node.orig, op_p)
                if counterpart is not None and mvars & read_set(op_p):
                    if ex.divisor_reads(op_p.expr) & mvars:
                        # the original run may block on a diverging divisor,
                        # so lockstep cannot be promised; flag instead
                        b.process(node, g, g.dst, frozenset())
                    else:
                        b.process(node, g, aligned(counterpart.dst, g.dst), mvars | write_set(op_p))
                elif counterpart is not None:
                    # reads agree, so the written value agrees as well
                    b.process(node, g, aligned(counterpart.dst, g.dst), mvars - write_set(op_p))
                elif cfg.align_same_write and (
                    same := _same_write_assignment(original, node.orig, op_p)
                ):
                    b.process(node, g, aligned(same.dst, g.dst), mvars | write_set(op_p))
                else:
                    # a new assignment: the original side stalls
                    b.process(node, g, aligned(node.orig, g.dst), mvars | write_set(op_p))
            else:
                stop, vdiff, clean = _resync(original, node.orig, mvars)
                matched = None
                if clean and stop != original.error:
                    matched = assume_match(
                        op_p, original.out_map.get(stop, ()), cfg.implication_matching
                    )
                if matched is not None:
                    if vdiff & (read_set(matched.op) | read_set(op_p)):
                        # the compared conditions read diverging data
                        b.process(node, g, g.dst, frozenset())
                    else:
                        b.process(node, g, aligned(matched.dst, g.dst), vdiff)
                else:
                    # a new assume: the original side stays put
                    b.process(node, g, aligned(stop, g.dst), vdiff)
    pairs = len(original.locations) * len(modified.locations)
    nvars = len(original.variables | modified.variables)
    dg = b.finish()
    assert dg.stats.pops <= pairs * (nvars + 1), "worklist pop budget exceeded"
    return dg
