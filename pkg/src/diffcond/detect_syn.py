"""Syntax-based difference detector.

Lockstep exploration of (original location, modified location) pairs:
a modified edge whose operation has no identical counterpart at the
current original location ends in a regression bug indicator node, and
nothing beyond it is explored.  Deliberately purely syntactic.
"""

from __future__ import annotations

from .cfa import CFA, check_deterministic
from .diffgraph import DifferenceGraph, _GraphBuilder, aligned


def diff_syn(original: CFA, modified: CFA) -> DifferenceGraph:
    for c, name in ((original, "original"), (modified, "modified")):
        problems = check_deterministic(c)
        if problems:
            raise ValueError(f"{name} program is not deterministic: {problems[0]}")
    b = _GraphBuilder(original, modified, followup_error_search=False)
    while (node := b.pop()) is not None:
        vdiff = frozenset()
        for g in modified.out_edges(node.mod):
            counterpart = original.find_edge(node.orig, g.op)
            if counterpart is None:
                b.process(node, g, g.dst, vdiff)
            else:
                b.process(node, g, aligned(counterpart.dst, g.dst), vdiff)
    return b.finish()
