"""End-to-end run: sources in, verdict and artifacts out.

Compiles the two sources, builds the difference graph with the chosen
detector, generates the condition, optionally reduces the modified
program to its uncovered residual, and verifies.  Every stage is timed,
and failures carry the stage name.  With an output directory the
intermediate objects are written as JSON files.
"""

from __future__ import annotations

import dataclasses
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import cfa as cfa_mod
from . import condition as cond_mod
from . import diffgraph as dg_mod
from . import expr as ex
from .cfa import CFA, op_text
from .condition import Condition, generate_condition
from .detect_dp import DetectorConfig, diff_dp
from .detect_syn import diff_syn
from .diffgraph import DifferenceGraph
from .frontend import compile_source
from .oracle import NondeterministicExecution, OracleBounds, resolve_inputs
from .reducer import ResidualCFA, mapping_json_obj, reduce
from .verify import Verdict, conditional_verify

DEFAULT_BOUNDS = OracleBounds(bound=4, depth=40)


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class PipelineReport:
    detector: str
    original: CFA
    modified: CFA
    graph: DifferenceGraph
    condition: Condition
    residual: ResidualCFA | None
    verdict: Verdict
    baseline: Verdict | None
    bounds: OracleBounds
    timings: dict[str, float]


def _stage(name: str, timings: dict[str, float], fn: Callable):
    start = time.perf_counter()
    try:
        out = fn()
    except (ex.SourceError, NondeterministicExecution, ValueError) as err:
        raise StageError(name, str(err)) from err
    timings[name] = time.perf_counter() - start
    return out


def run_pipeline(
    original_src: str,
    modified_src: str,
    *,
    detector: str = "dp",
    config: DetectorConfig | None = None,
    bounds: OracleBounds = DEFAULT_BOUNDS,
    use_reducer: bool = False,
    baseline: bool = False,
    outdir: str | Path | None = None,
) -> PipelineReport:
    if detector not in ("dp", "syn"):
        raise ValueError(f"unknown detector {detector!r}")
    timings: dict[str, float] = {}

    def compile_both():
        return compile_source(original_src), compile_source(modified_src)

    original, modified = _stage("frontend", timings, compile_both)
    # pin the input variables so every downstream run ranges the same box
    bounds = dataclasses.replace(
        bounds, input_vars=resolve_inputs(bounds, (original, modified))
    )

    if detector == "dp":
        graph = _stage("detect", timings, lambda: diff_dp(original, modified, config))
    else:
        graph = _stage("detect", timings, lambda: diff_syn(original, modified))
    condition = _stage("condition", timings, lambda: generate_condition(graph))

    residual = None
    if use_reducer:
        residual = _stage("reduce", timings, lambda: reduce(modified, condition))
        verdict = _stage(
            "verify", timings, lambda: conditional_verify(residual.cfa, None, bounds)
        )
    else:
        verdict = _stage(
            "verify", timings, lambda: conditional_verify(modified, condition, bounds)
        )

    base = None
    if baseline:
        base = _stage(
            "baseline", timings, lambda: conditional_verify(modified, None, bounds)
        )

    report = PipelineReport(
        detector=detector,
        original=original,
        modified=modified,
        graph=graph,
        condition=condition,
        residual=residual,
        verdict=verdict,
        baseline=base,
        bounds=bounds,
        timings=timings,
    )
    if outdir is not None:
        write_artifacts(report, Path(outdir))
    return report


def verdict_json_obj(v: Verdict) -> dict:
    return {
        "result": v.result,
        "explored_paths": v.explored_paths,
        "covered_paths": v.covered_paths,
        "truncated": v.truncated,
        "alarms": [
            {
                "input": dict(state),
                "locations": list(p.locations),
                "trace": [op_text(e.op) for e in p.edges],
            }
            for state, p in v.alarms
        ],
    }


def report_json_obj(report: PipelineReport) -> dict:
    g = report.graph
    a = report.condition
    obj = {
        "detector": report.detector,
        "bounds": {
            "bound": report.bounds.bound,
            "depth": report.bounds.depth,
            "input_vars": list(report.bounds.input_vars or ()),
        },
        "graph": {
            "nodes": g.stats.nodes,
            "edges": g.stats.edges,
            "pops": g.stats.pops,
            "delta": len(g.delta),
        },
        "condition": {
            "states": len(a.states),
            "accepting": len(a.accepting),
            "transitions": len(a.transitions),
        },
        "residual": None
        if report.residual is None
        else {
            "locations": len(report.residual.cfa.locations),
            "edges": len(report.residual.cfa.edges),
        },
        "verdict": {
            "result": report.verdict.result,
            "explored_paths": report.verdict.explored_paths,
            "covered_paths": report.verdict.covered_paths,
            "truncated": report.verdict.truncated,
            "alarm_inputs": [dict(s) for s in report.verdict.alarm_inputs()],
        },
        "baseline": None
        if report.baseline is None
        else {
            "result": report.baseline.result,
            "explored_paths": report.baseline.explored_paths,
            "alarm_inputs": [dict(s) for s in report.baseline.alarm_inputs()],
        },
        "timings": dict(report.timings),
    }
    return obj


def _dump(outdir: Path, name: str, obj) -> None:
    path = outdir / name
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_artifacts(report: PipelineReport, outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    _dump(outdir, "original.cfa.json", cfa_mod.to_json_obj(report.original))
    _dump(outdir, "modified.cfa.json", cfa_mod.to_json_obj(report.modified))
    _dump(outdir, "graph.json", dg_mod.to_json_obj(report.graph))
    _dump(outdir, "condition.json", cond_mod.to_json_obj(report.condition))
    names = ["original.cfa.json", "modified.cfa.json", "graph.json", "condition.json"]
    if report.residual is not None:
        _dump(outdir, "residual.json", cfa_mod.to_json_obj(report.residual.cfa))
        _dump(outdir, "residual.map.json", mapping_json_obj(report.residual))
        names += ["residual.json", "residual.map.json"]
    _dump(outdir, "verdict.json", verdict_json_obj(report.verdict))
    names.append("verdict.json")
    if report.baseline is not None:
        _dump(outdir, "baseline.json", verdict_json_obj(report.baseline))
        names.append("baseline.json")
    _dump(outdir, "report.json", report_json_obj(report))
    names.append("report.json")
    return [outdir / n for n in names]
