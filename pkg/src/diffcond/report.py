"""Fuzz-campaign driver: per-task soundness checks, CSV, and figures.

For each program pair the campaign computes the ground-truth regression
bugs with the bounded oracle, runs both detectors, and checks every
promised property: graph well-formedness and label determinism, the
worklist pop budget, condition well-formedness, no regression-bug path
covered, bug indicators reachable from every traced bug prefix, aligned
endpoints backed by an actual original-program visit, reducer alarm-set
equivalence, and alarms catching every regression bug.  Violations are
collected as tagged strings rather than raised, so one bad task cannot
hide the rest.
"""

from __future__ import annotations

import csv
import dataclasses
import time
from dataclasses import dataclass
from functools import partial
from pathlib import Path

from .cfa import CFA
from .condition import covers, generate_condition, validate_condition
from .detect_dp import DetectorConfig, diff_dp
from .detect_syn import diff_syn
from .diffgraph import (
    DifferenceGraph,
    delta_reaching_nodes,
    trace_path,
    validate_graph,
)
from .frontend import compile_source
from .oracle import (
    OracleBounds,
    enumerate_paths,
    regression_bug_paths,
    resolve_inputs,
    run_path,
    states_agree_except,
)
from .pipeline import DEFAULT_BOUNDS
from .reducer import reduce
from .verify import conditional_verify


@dataclass(frozen=True)
class CampaignTask:
    name: str
    original: str
    modified: str
    mutation: str = ""


@dataclass(frozen=True)
class DetectorOutcome:
    pairs: int  # |original locations| * |modified locations|
    nodes: int
    edges: int
    pops: int
    delta: int
    cond_states: int
    cond_accepting: int
    cond_transitions: int
    explored: int
    covered: int
    alarms: int
    detect_s: float
    verify_s: float


@dataclass(frozen=True)
class TaskRecord:
    name: str
    mutation: str
    status: str  # "ok" or "error"
    error: str
    rb_paths: int
    violations: tuple[str, ...]
    syn: DetectorOutcome | None
    dp: DetectorOutcome | None
    precision_gain: bool


def _pop_budget(original: CFA, modified: CFA) -> int:
    pairs = len(original.locations) * len(modified.locations)
    nvars = len(original.variables | modified.variables)
    return pairs * (nvars + 1)


def _alignment_violations(
    original: CFA, graph: DifferenceGraph, mod_paths, bounds: OracleBounds
) -> list[str]:
    """Aligned endpoints promise an original visit: for every modified
    path fully traced to an aligned node, the original run on the same
    input must visit the node's original location in a state agreeing
    outside the tracked variable set."""
    out = []
    # the original may trail behind and catch up over assignment chains,
    # so give its replay generous headroom
    ext_depth = bounds.depth * (len(original.locations) + 2)
    replays: dict[tuple, object] = {}
    for p in mod_paths:
        trace = trace_path(graph, p.edges)
        if len(trace) != len(p.edges) + 1:
            continue
        end = trace[-1]
        if end.kind != "aligned":
            continue
        allowed = graph.modified_vars.get(end, frozenset())
        key = tuple(sorted(p.initial_state.items()))
        orun = replays.get(key)
        if orun is None:
            orun = run_path(original, p.initial_state, ext_depth)
            replays[key] = orun
        final = p.states[-1]
        ok = any(
            loc == end.orig and states_agree_except(st, final, allowed)
            for loc, st in zip(orun.locations, orun.states)
        )
        if not ok:
            out.append(f"alignment:{end.orig},{end.mod}:input={key}")
    return out


def check_task(
    task: CampaignTask,
    bounds: OracleBounds = DEFAULT_BOUNDS,
    config: DetectorConfig | None = None,
) -> TaskRecord:
    try:
        return _check_task(task, bounds, config)
    except Exception as err:  # one broken task must not sink the campaign
        return TaskRecord(
            name=task.name,
            mutation=task.mutation,
            status="error",
            error=f"{type(err).__name__}: {err}",
            rb_paths=0,
            violations=(),
            syn=None,
            dp=None,
            precision_gain=False,
        )


def _check_task(task: CampaignTask, bounds: OracleBounds, config) -> TaskRecord:
    original = compile_source(task.original)
    modified = compile_source(task.modified)
    bounds = dataclasses.replace(
        bounds, input_vars=resolve_inputs(bounds, (original, modified))
    )
    rb = regression_bug_paths(original, modified, bounds)
    rb_inputs = {tuple(sorted(p.initial_state.items())) for p in rb}
    mod_paths = enumerate_paths(modified, bounds)

    violations: list[str] = []
    outcomes: dict[str, DetectorOutcome] = {}
    for det in ("syn", "dp"):
        t0 = time.perf_counter()
        if det == "dp":
            graph = diff_dp(original, modified, config)
        else:
            graph = diff_syn(original, modified)
        detect_s = time.perf_counter() - t0

        for msg in validate_graph(graph):
            violations.append(f"{det}:graph:{msg}")
        if graph.stats.pops > _pop_budget(original, modified):
            violations.append(f"{det}:pop-budget:{graph.stats.pops}")

        condition = generate_condition(graph)
        for msg in validate_condition(condition):
            violations.append(f"{det}:condition:{msg}")

        reach = delta_reaching_nodes(graph)
        for p in rb:
            if covers(condition, p):
                violations.append(f"{det}:covered-rb:{sorted(p.initial_state.items())}")
            if trace_path(graph, p.edges)[-1] not in reach:
                violations.append(
                    f"{det}:delta-unreachable:{sorted(p.initial_state.items())}"
                )
        if det == "dp":
            violations.extend(
                _alignment_violations(original, graph, mod_paths, bounds)
            )

        t0 = time.perf_counter()
        verdict = conditional_verify(modified, condition, bounds)
        verify_s = time.perf_counter() - t0

        alarm_inputs = {
            tuple(sorted(state.items())) for state in verdict.alarm_inputs()
        }
        if not rb_inputs <= alarm_inputs:
            violations.append(f"{det}:rb-missed:{sorted(rb_inputs - alarm_inputs)}")

        residual = reduce(modified, condition)
        residual_verdict = conditional_verify(residual.cfa, None, bounds)
        residual_inputs = {
            tuple(sorted(state.items())) for state in residual_verdict.alarm_inputs()
        }
        if residual_inputs != alarm_inputs:
            violations.append(f"{det}:reducer-mismatch")

        outcomes[det] = DetectorOutcome(
            pairs=len(original.locations) * len(modified.locations),
            nodes=graph.stats.nodes,
            edges=graph.stats.edges,
            pops=graph.stats.pops,
            delta=len(graph.delta),
            cond_states=len(condition.states),
            cond_accepting=len(condition.accepting),
            cond_transitions=len(condition.transitions),
            explored=verdict.explored_paths,
            covered=verdict.covered_paths,
            alarms=len(verdict.alarms),
            detect_s=detect_s,
            verify_s=verify_s,
        )

    gain = outcomes["dp"].cond_accepting > 0 and outcomes["syn"].cond_accepting == 0
    return TaskRecord(
        name=task.name,
        mutation=task.mutation,
        status="ok",
        error="",
        rb_paths=len(rb),
        violations=tuple(violations),
        syn=outcomes["syn"],
        dp=outcomes["dp"],
        precision_gain=gain,
    )


@dataclass(frozen=True)
class CampaignResult:
    records: tuple[TaskRecord, ...]
    aggregate: dict


def _mean(values) -> float:
    values = list(values)
    return sum(values) / len(values) if values else 0.0


def aggregate_records(records) -> dict:
    ok = [r for r in records if r.status == "ok"]
    agg = {
        "tasks": len(records),
        "errors": sum(1 for r in records if r.status == "error"),
        "violations": sum(len(r.violations) for r in records),
        "tasks_with_rb": sum(1 for r in ok if r.rb_paths > 0),
        "rb_paths": sum(r.rb_paths for r in ok),
        "precision_gain_tasks": sum(1 for r in ok if r.precision_gain),
    }
    for det in ("syn", "dp"):
        outs = [getattr(r, det) for r in ok if getattr(r, det) is not None]
        agg[det] = {
            "mean_nodes": _mean(o.nodes for o in outs),
            "mean_cond_states": _mean(o.cond_states for o in outs),
            "covered_total": sum(o.covered for o in outs),
            "explored_total": sum(o.explored for o in outs),
            "alarms_total": sum(o.alarms for o in outs),
            "mean_detect_s": _mean(o.detect_s for o in outs),
            "mean_verify_s": _mean(o.verify_s for o in outs),
        }
    return agg


def run_campaign(
    tasks,
    bounds: OracleBounds = DEFAULT_BOUNDS,
    config: DetectorConfig | None = None,
    jobs: int = 1,
) -> CampaignResult:
    tasks = list(tasks)
    if jobs > 1:
        from multiprocessing import Pool

        with Pool(jobs) as pool:
            records = pool.map(partial(check_task, bounds=bounds, config=config), tasks)
    else:
        records = [check_task(t, bounds, config) for t in tasks]
    return CampaignResult(tuple(records), aggregate_records(records))


# ------------------------------------------------------------------ outputs

_NUMERIC_FIELDS = (
    "pairs",
    "nodes",
    "edges",
    "pops",
    "delta",
    "cond_states",
    "cond_accepting",
    "cond_transitions",
    "explored",
    "covered",
    "alarms",
    "detect_s",
    "verify_s",
)


def write_csv(result: CampaignResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ["name", "mutation", "status", "error", "rb_paths", "precision_gain", "violations"]
    for det in ("syn", "dp"):
        header += [f"{det}_{f}" for f in _NUMERIC_FIELDS]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in result.records:
            row = [
                r.name,
                r.mutation,
                r.status,
                r.error,
                r.rb_paths,
                int(r.precision_gain),
                "; ".join(r.violations),
            ]
            for det in ("syn", "dp"):
                o = getattr(r, det)
                if o is None:
                    row += [""] * len(_NUMERIC_FIELDS)
                else:
                    row += [
                        f"{getattr(o, f):.6f}" if f.endswith("_s") else getattr(o, f)
                        for f in _NUMERIC_FIELDS
                    ]
            w.writerow(row)
    return path


def render_figures(result: CampaignResult, outdir: str | Path) -> list[Path]:
    """Two scatter plots: condition sizes per detector, and detection
    time against problem size."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ok = [r for r in result.records if r.status == "ok" and r.syn and r.dp]
    paths = []

    fig, ax = plt.subplots(figsize=(6, 6))
    xs = [r.syn.cond_states for r in ok]
    ys = [r.dp.cond_states for r in ok]
    ax.scatter(xs, ys, alpha=0.35, s=18, color="tab:blue")
    top = max(xs + ys, default=1) + 1
    ax.plot([0, top], [0, top], color="gray", linewidth=0.8, linestyle="--")
    ax.set_xlabel("condition states, syntactic detector")
    ax.set_ylabel("condition states, data-sensitive detector")
    ax.set_title("Condition sizes per task")
    fig.tight_layout()
    p = outdir / "condition_sizes.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(7, 5))
    for det, color in (("syn", "tab:orange"), ("dp", "tab:blue")):
        xs = [getattr(r, det).pairs for r in ok]
        ys = [getattr(r, det).detect_s * 1000.0 for r in ok]
        label = "syntactic" if det == "syn" else "data-sensitive"
        ax.scatter(xs, ys, alpha=0.35, s=18, color=color, label=label)
    ax.set_xlabel("location pairs (|original| x |modified|)")
    ax.set_ylabel("detection time (ms)")
    ax.set_title("Detection time against problem size")
    ax.legend()
    fig.tight_layout()
    p = outdir / "detect_times.png"
    fig.savefig(p, dpi=120)
    plt.close(fig)
    paths.append(p)
    return paths
