"""Difference graphs relating original and modified control flow.

Nodes are either aligned pairs (original location, modified location) or
bare modified locations marking points where no witness for equivalent
behavior could be constructed; the bare nodes form the delta set, the
regression bug indicators.  Every edge is labeled with an edge of the
modified CFA, so graph paths trace modified-program executions.

The _GraphBuilder worklist chassis is shared by both detectors: it owns
the bookkeeping that bad nodes absorb their aligned twins, that aligned
successors sitting on the modified error location (while the original is
elsewhere) degrade to bad nodes, and the final edge redirection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from . import expr as ex
from .cfa import CFA, Edge, edge_key, op_text


@dataclass(frozen=True, slots=True)
class Node:
    kind: str  # "aligned" | "bad"
    orig: int | None  # original location; None for bad nodes
    mod: int  # modified location


def aligned(orig: int, mod: int) -> Node:
    return Node("aligned", orig, mod)


def bad(mod: int) -> Node:
    return Node("bad", None, mod)


def node_key(n: Node) -> tuple:
    return (0 if n.kind == "aligned" else 1, n.mod, -1 if n.orig is None else n.orig)


@dataclass(frozen=True)
class GEdge:
    src: Node
    label: Edge  # an edge of the modified CFA
    dst: Node


@dataclass(frozen=True)
class DetectStats:
    pops: int
    nodes: int
    edges: int


@dataclass(frozen=True)
class DifferenceGraph:
    original: CFA
    modified: CFA
    nodes: frozenset[Node]
    root: Node
    delta: frozenset[Node]
    edges: tuple[GEdge, ...]
    modified_vars: Mapping[Node, frozenset[str]]  # aligned nodes only
    stats: DetectStats

    def out_edges(self, n: Node) -> list[GEdge]:
        return [e for e in self.edges if e.src == n]


def validate_graph(dg: DifferenceGraph) -> list[str]:
    """Structural invariants; empty list when all hold."""
    out = []
    if dg.root not in dg.nodes:
        out.append("root is not a node")
    if not dg.delta <= dg.nodes:
        out.append("delta contains non-nodes")
    for n in dg.nodes:
        if (n.kind == "bad") != (n in dg.delta):
            out.append(f"delta mismatch for node {n}")
        if n.kind == "aligned" and n not in dg.modified_vars:
            out.append(f"aligned node {n} has no tracked variable set")
    mod_edges = set(dg.modified.edges)
    by_src_label: dict[tuple, set] = {}
    for e in dg.edges:
        if e.src not in dg.nodes or e.dst not in dg.nodes:
            out.append(f"edge endpoint outside nodes: {e}")
        if e.label not in mod_edges:
            out.append(f"edge label {op_text(e.label.op)!r} is not a modified-program edge")
        if e.src in dg.delta:
            out.append(f"edge leaves a bug indicator node: {e}")
        by_src_label.setdefault((e.src, e.label), set()).add(e.dst)
    for (src, label), dsts in by_src_label.items():
        if len(dsts) > 1:
            out.append(
                f"label-determinism: node {src} has {len(dsts)} targets on {op_text(label.op)!r}"
            )
    return out


def delta_reaching_nodes(dg: DifferenceGraph) -> frozenset[Node]:
    """Nodes from which some delta node is reachable (delta included)."""
    preds: dict[Node, list[Node]] = {}
    for e in dg.edges:
        preds.setdefault(e.dst, []).append(e.src)
    seen = set(dg.delta)
    work = list(dg.delta)
    while work:
        n = work.pop()
        for p in preds.get(n, ()):
            if p not in seen:
                seen.add(p)
                work.append(p)
    return frozenset(seen)


def trace_path(dg: DifferenceGraph, edges) -> list[Node]:
    """Follow the labels of a modified-program path from the root; stops
    at the first missing label or at a node without outgoing edges.
    Returns the node sequence (prefix endpoints), root first."""
    step: dict[tuple[Node, Edge], Node] = {}
    for e in dg.edges:
        step[(e.src, e.label)] = e.dst
    nodes = [dg.root]
    cur = dg.root
    for g in edges:
        nxt = step.get((cur, g))
        if nxt is None:
            break
        nodes.append(nxt)
        cur = nxt
    return nodes


class _GraphBuilder:
    """Worklist state shared by both difference detectors."""

    def __init__(self, original: CFA, modified: CFA, followup_error_search: bool):
        self.original = original
        self.modified = modified
        self.followup = followup_error_search
        self.visited: dict[Node, frozenset[str]] = {}
        self.bad_nodes: dict[int, Node] = {}  # modified location -> bad node
        self.recorded: list[tuple[Node, Edge, Node]] = []
        self.waitlist: deque[Node] = deque()
        self.queued: set[Node] = set()
        self.pops = 0
        self.root = aligned(original.initial, modified.initial)
        self.visited[self.root] = frozenset()
        self._push(self.root)

    def _push(self, n: Node) -> None:
        if n not in self.queued:
            self.queued.add(n)
            self.waitlist.append(n)

    def pop(self) -> Node | None:
        """Next live waitlist entry; absorbed nodes are skipped silently."""
        while self.waitlist:
            n = self.waitlist.popleft()
            if n in self.queued:
                self.queued.discard(n)
                self.pops += 1
                return n
        return None

    def _bad(self, mod: int) -> Node:
        n = self.bad_nodes.get(mod)
        if n is None:
            n = bad(mod)
            self.bad_nodes[mod] = n
            # the bad node absorbs aligned nodes on the same location
            for twin in [v for v in self.visited if v.mod == mod]:
                del self.visited[twin]
                self.queued.discard(twin)
        return n

    def _error_chain(self, loc: int) -> bool:
        """True when the original reaches its error location from loc via
        operations that execute in every state: assignments with total
        right-hand sides and constant-true assumes (the error marker's
        encoding).  Used to keep an alignment onto the modified error
        location honest."""
        seen = set()
        while loc != self.original.error:
            if loc in seen:
                return False
            seen.add(loc)
            outs = self.original.out_map.get(loc, ())
            if len(outs) != 1:
                return False
            op = outs[0].op
            if op.kind == "assign":
                if not ex.always_evaluates(op.expr):
                    return False
            elif op.expr != ex.Bool(True):
                return False
            loc = outs[0].dst
        return True

    def process(self, pred: Node, label: Edge, succ, vdiff: frozenset[str]) -> None:
        """Record one exploration step.

        succ is either a bare modified location (int), meaning a
        regression bug indicator, or an aligned Node carrying vdiff as
        its change-affected variable set.
        """
        if isinstance(succ, int):
            self.recorded.append((pred, label, self._bad(succ)))
            return
        if succ.mod == self.modified.error and succ.orig != self.original.error:
            # only an original at its own error location may align here
            if self.followup and self._error_chain(succ.orig):
                succ = aligned(self.original.error, succ.mod)
            else:
                self.process(pred, label, succ.mod, frozenset())
                return
        if succ.mod in self.bad_nodes:
            self.recorded.append((pred, label, self.bad_nodes[succ.mod]))
            return
        known = self.visited.get(succ)
        if succ.orig != self.original.error and (known is None or not vdiff <= known):
            self._push(succ)
        self.visited[succ] = (known or frozenset()) | vdiff
        self.recorded.append((pred, label, succ))

    def finish(self, pops_cap: int | None = None) -> DifferenceGraph:
        root_mod = self.modified.initial
        degenerate = root_mod in self.bad_nodes or (
            root_mod == self.modified.error and self.original.initial != self.original.error
        )
        if degenerate:
            n = bad(root_mod)
            return DifferenceGraph(
                self.original,
                self.modified,
                nodes=frozenset((n,)),
                root=n,
                delta=frozenset((n,)),
                edges=(),
                modified_vars={},
                stats=DetectStats(self.pops, 1, 0),
            )
        final_edges = set()
        for src, label, dst in self.recorded:
            if src not in self.visited:
                continue  # source was absorbed by a bad node
            if dst.kind == "aligned" and dst.mod in self.bad_nodes:
                dst = self.bad_nodes[dst.mod]
            final_edges.add(GEdge(src, label, dst))
        nodes = frozenset(self.visited) | frozenset(self.bad_nodes.values())
        edges = tuple(
            sorted(final_edges, key=lambda e: (node_key(e.src), edge_key(e.label), node_key(e.dst)))
        )
        return DifferenceGraph(
            self.original,
            self.modified,
            nodes=nodes,
            root=self.root,
            delta=frozenset(self.bad_nodes.values()),
            edges=edges,
            modified_vars=dict(self.visited),
            stats=DetectStats(self.pops, len(nodes), len(edges)),
        )


# ---------------------------------------------------------------------------
# serialization


def canonical_node_ids(dg: DifferenceGraph) -> dict[Node, int]:
    """Breadth-first ids from the root, label-sorted; unreachable nodes
    (possible after bad-node absorption) follow in a fixed order."""
    succ: dict[Node, list[tuple[tuple, Node]]] = {}
    for e in dg.edges:
        succ.setdefault(e.src, []).append((edge_key(e.label), e.dst))
    ids: dict[Node, int] = {}
    queue = deque((dg.root,)) if dg.root in dg.nodes else deque()
    while queue:
        n = queue.popleft()
        if n in ids:
            continue
        ids[n] = len(ids)
        for _key, dst in sorted(succ.get(n, ()), key=lambda kv: (kv[0], node_key(kv[1]))):
            if dst not in ids:
                queue.append(dst)
    for n in sorted(dg.nodes, key=node_key):
        if n not in ids:
            ids[n] = len(ids)
    return ids


def to_json_obj(dg: DifferenceGraph) -> dict:
    ids = canonical_node_ids(dg)
    nodes = []
    for n in sorted(dg.nodes, key=lambda n: ids[n]):
        nodes.append(
            {
                "id": ids[n],
                "kind": n.kind,
                "orig": n.orig,
                "mod": n.mod,
                "modified_vars": sorted(dg.modified_vars.get(n, ())),
            }
        )
    edges = [
        {
            "src": ids[e.src],
            "edge": {"src": e.label.src, "op": op_text(e.label.op), "dst": e.label.dst},
            "dst": ids[e.dst],
        }
        for e in dg.edges
    ]
    edges.sort(key=lambda item: (item["src"], item["edge"]["src"], item["edge"]["op"], item["edge"]["dst"], item["dst"]))
    return {
        "nodes": nodes,
        "root": ids[dg.root],
        "delta": sorted(ids[n] for n in dg.delta),
        "edges": edges,
    }


def to_dot(dg: DifferenceGraph, name: str = "diffgraph") -> str:
    """GraphViz rendering; bug indicator nodes are double-circled."""
    ids = canonical_node_ids(dg)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for n in sorted(dg.nodes, key=lambda n: ids[n]):
        if n.kind == "aligned":
            vars_txt = ",".join(sorted(dg.modified_vars.get(n, ())))
            label = f"({n.orig},{n.mod}) {{{vars_txt}}}"
            shape = ""
        else:
            label = f"bad({n.mod})"
            shape = ", shape=doublecircle"
        lines.append(f'  n{ids[n]} [label="{label}"{shape}];')
    for e in dg.edges:
        label = op_text(e.label.op).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{ids[e.src]} -> n{ids[e.dst]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
