"""Command-line interface.

Subcommands mirror the library stages: parse a single program, diff a
pair into a difference graph, extract the condition automaton, reduce
the modified program against it, verify conditionally, enumerate oracle
paths, run the whole pipeline with artifacts, or fuzz generated pairs
into a CSV report with figures.

Exit codes for verify and pipeline: 0 safe, 1 alarm, 2 safe but with
truncated paths (inconclusive), 4 on input or stage errors.  Set
DIFFCOND_COLOR=0 to disable ANSI colors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import cfa as cfa_mod
from . import condition as cond_mod
from . import diffgraph as dg_mod
from .detect_dp import DetectorConfig, diff_dp
from .detect_syn import diff_syn
from .expr import SourceError
from .frontend import compile_source, parse_program, pretty_print
from .oracle import (
    NondeterministicExecution,
    OracleBounds,
    enumerate_paths,
    regression_bug_paths,
)
from .pipeline import (
    DEFAULT_BOUNDS,
    PipelineReport,
    StageError,
    report_json_obj,
    run_pipeline,
    verdict_json_obj,
)
from .reducer import mapping_json_obj, reduce
from .report import CampaignTask, render_figures, run_campaign, write_csv
from .taskgen import generate_task

_EXIT_SAFE = 0
_EXIT_ALARM = 1
_EXIT_INCONCLUSIVE = 2
_EXIT_ERROR = 4


def _color_enabled() -> bool:
    if os.environ.get("DIFFCOND_COLOR", "") == "0":
        return False
    return hasattr(sys.stdout, "isatty") and sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\033[{code}m{text}\033[0m"
    return text


def _green(t: str) -> str:
    return _paint(t, "32")


def _red(t: str) -> str:
    return _paint(t, "31")


def _yellow(t: str) -> str:
    return _paint(t, "33")


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _read(path: str) -> str:
    return Path(path).read_text()


def _bounds_from(args) -> OracleBounds:
    inputs = None
    if args.inputs is not None:
        inputs = tuple(v for v in args.inputs.split(",") if v)
    return OracleBounds(bound=args.bound, depth=args.depth, input_vars=inputs)


def _config_from(args) -> DetectorConfig:
    return DetectorConfig(
        align_same_write=args.align_same_write,
        followup_error_search=not args.no_followup_error_search,
        implication_matching=not args.no_implication,
    )


def _add_detector_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--detector", choices=("dp", "syn"), default="dp",
                   help="difference detector (default: dp, the data-sensitive one)")
    p.add_argument("--align-same-write", action="store_true",
                   help="align differing assignments that write the same variables")
    p.add_argument("--no-followup-error-search", action="store_true",
                   help="flag every error-location alignment instead of probing the original")
    p.add_argument("--no-implication", action="store_true",
                   help="match assumes only when textually identical")


def _add_bounds_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound", type=int, default=DEFAULT_BOUNDS.bound,
                   help="input box radius (default: %(default)s)")
    p.add_argument("--depth", type=int, default=DEFAULT_BOUNDS.depth,
                   help="maximum path length (default: %(default)s)")
    p.add_argument("--inputs", default=None,
                   help="comma-separated input variables (default: derived)")


def _detect(args):
    original = compile_source(_read(args.original))
    modified = compile_source(_read(args.modified))
    if args.detector == "dp":
        graph = diff_dp(original, modified, _config_from(args))
    else:
        graph = diff_syn(original, modified)
    return original, modified, graph


def _verdict_exit(verdict) -> int:
    if verdict.result == "alarm":
        return _EXIT_ALARM
    return _EXIT_INCONCLUSIVE if verdict.truncated else _EXIT_SAFE


def _print_verdict(verdict) -> None:
    word = {
        "safe": _green("safe"),
        "alarm": _red("alarm"),
    }[verdict.result]
    if verdict.result == "safe" and verdict.truncated:
        word = _yellow("safe (truncated: inconclusive)")
    print(f"result: {word}")
    print(
        f"explored: {verdict.explored_paths}  covered: {verdict.covered_paths}"
        f"  truncated: {str(verdict.truncated).lower()}"
    )
    for state, path in verdict.alarms:
        items = ", ".join(f"{k}={v}" for k, v in sorted(state.items()))
        trace = " ; ".join(cfa_mod.op_text(e.op) for e in path.edges)
        print(f"  alarm [{items}]  {trace}")


# ------------------------------------------------------------- subcommands


def _cmd_parse(args) -> int:
    program = parse_program(_read(args.file))
    c = compile_source(_read(args.file))
    if args.cfa:
        _print_json(cfa_mod.to_json_obj(c))
    elif args.dot:
        print(cfa_mod.to_dot(c), end="")
    else:
        print(pretty_print(program), end="")
    return 0


def _cmd_diff(args) -> int:
    _, _, graph = _detect(args)
    if args.json:
        _print_json(dg_mod.to_json_obj(graph))
    elif args.dot:
        print(dg_mod.to_dot(graph), end="")
    else:
        s = graph.stats
        print(
            f"nodes: {s.nodes}  edges: {s.edges}  bug indicators: {len(graph.delta)}"
            f"  pops: {s.pops}"
        )
    return 0


def _cmd_extract(args) -> int:
    _, _, graph = _detect(args)
    a = cond_mod.generate_condition(graph)
    if args.json:
        _print_json(cond_mod.to_json_obj(a))
    elif args.dot:
        print(cond_mod.to_dot(a), end="")
    else:
        print(
            f"states: {len(a.states)}  accepting: {len(a.accepting)}"
            f"  transitions: {len(a.transitions)}"
        )
    return 0


def _cmd_reduce(args) -> int:
    _, modified, graph = _detect(args)
    a = cond_mod.generate_condition(graph)
    residual = reduce(modified, a)
    if args.dot:
        print(cfa_mod.to_dot(residual.cfa), end="")
    else:
        _print_json(
            {
                "cfa": cfa_mod.to_json_obj(residual.cfa),
                "mapping": mapping_json_obj(residual),
            }
        )
    return 0


def _cmd_verify(args) -> int:
    report = run_pipeline(
        _read(args.original),
        _read(args.modified),
        detector=args.detector,
        config=_config_from(args),
        bounds=_bounds_from(args),
        use_reducer=args.reduce,
    )
    if args.json:
        obj = verdict_json_obj(report.verdict)
        obj["bounds"] = report_json_obj(report)["bounds"]
        _print_json(obj)
    else:
        _print_verdict(report.verdict)
    return _verdict_exit(report.verdict)


def _cmd_oracle(args) -> int:
    bounds = _bounds_from(args)
    c = compile_source(_read(args.original))
    if args.modified is not None:
        c2 = compile_source(_read(args.modified))
        paths = regression_bug_paths(c, c2, bounds)
        kind = "regression bug paths"
        err_loc = c2.error
    else:
        paths = enumerate_paths(c, bounds)
        if args.errors_only:
            paths = [p for p in paths if p.final_location == c.error]
        kind = "error paths" if args.errors_only else "paths"
        err_loc = c.error
    if args.json:
        _print_json(
            [
                {
                    "input": dict(p.initial_state),
                    "locations": list(p.locations),
                    "error": p.final_location == err_loc,
                    "truncated": p.truncated,
                }
                for p in paths
            ]
        )
        return 0
    print(f"{kind}: {len(paths)}")
    for p in paths:
        items = ", ".join(f"{k}={v}" for k, v in sorted(p.initial_state.items()))
        flags = []
        if p.final_location == err_loc:
            flags.append(_red("error"))
        if p.truncated:
            flags.append(_yellow("truncated"))
        suffix = f"  [{' '.join(flags)}]" if flags else ""
        print(f"  [{items}]  {len(p.edges)} steps -> location {p.final_location}{suffix}")
    return 0


def _cmd_pipeline(args) -> int:
    report = run_pipeline(
        _read(args.original),
        _read(args.modified),
        detector=args.detector,
        config=_config_from(args),
        bounds=_bounds_from(args),
        use_reducer=args.reduce,
        baseline=args.baseline,
        outdir=args.outdir,
    )
    if args.json:
        _print_json(report_json_obj(report))
    else:
        _print_verdict(report.verdict)
        print(f"artifacts written to {args.outdir}")
    return _verdict_exit(report.verdict)


def _cmd_fuzz(args) -> int:
    tasks = []
    for seed in range(args.start, args.start + args.seeds):
        pair = generate_task(seed)
        tasks.append(
            CampaignTask(f"seed{seed}", pair.original, pair.modified, pair.mutation)
        )
    result = run_campaign(tasks, bounds=_bounds_from(args), jobs=args.jobs)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = write_csv(result, outdir / "campaign.csv")
    figure_paths = render_figures(result, outdir)
    (outdir / "aggregate.json").write_text(
        json.dumps(result.aggregate, indent=2, sort_keys=True) + "\n"
    )
    agg = result.aggregate
    print(f"tasks: {agg['tasks']}  errors: {agg['errors']}  violations: {agg['violations']}")
    print(
        f"tasks with regression bugs: {agg['tasks_with_rb']}"
        f"  precision gains: {agg['precision_gain_tasks']}"
    )
    for det in ("syn", "dp"):
        d = agg[det]
        print(
            f"  {det}: covered {d['covered_total']}  explored {d['explored_total']}"
            f"  alarms {d['alarms_total']}"
        )
    shown = 0
    for r in result.records:
        for v in r.violations:
            print(_red(f"violation {r.name}: {v}"))
            shown += 1
            if shown >= 10:
                break
        if shown >= 10:
            break
    print(f"wrote {csv_path} and {', '.join(str(p) for p in figure_paths)}")
    clean = agg["errors"] == 0 and agg["violations"] == 0
    return 0 if clean else 1


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="diffcond",
        description="Difference-conditional verification of program pairs.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse one program and echo it or its CFA")
    p.add_argument("file")
    p.add_argument("--cfa", action="store_true", help="print the compiled CFA as JSON")
    p.add_argument("--dot", action="store_true", help="print the compiled CFA as DOT")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("diff", help="build the difference graph of a pair")
    p.add_argument("original")
    p.add_argument("modified")
    _add_detector_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=_cmd_diff)

    p = sub.add_parser("extract", help="generate the condition automaton of a pair")
    p.add_argument("original")
    p.add_argument("modified")
    _add_detector_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=_cmd_extract)

    p = sub.add_parser("reduce", help="build the residual modified program")
    p.add_argument("original")
    p.add_argument("modified")
    _add_detector_flags(p)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("verify", help="conditionally verify the modified program")
    p.add_argument("original")
    p.add_argument("modified")
    _add_detector_flags(p)
    _add_bounds_flags(p)
    p.add_argument("--reduce", action="store_true",
                   help="verify the residual instead of using the condition directly")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("oracle", help="enumerate bounded executions")
    p.add_argument("original")
    p.add_argument("modified", nargs="?", default=None,
                   help="with a second program, list its regression bug paths")
    _add_bounds_flags(p)
    p.add_argument("--errors-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("pipeline", help="run all stages and write artifacts")
    p.add_argument("original")
    p.add_argument("modified")
    _add_detector_flags(p)
    _add_bounds_flags(p)
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--baseline", action="store_true",
                   help="also run plain bounded verification for comparison")
    p.add_argument("--outdir", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("fuzz", help="campaign over generated program pairs")
    p.add_argument("--seeds", type=int, default=100, help="number of tasks")
    p.add_argument("--start", type=int, default=0, help="first seed")
    p.add_argument("--outdir", default="fuzz-out")
    p.add_argument("--jobs", type=int, default=1)
    _add_bounds_flags(p)
    p.set_defaults(fn=_cmd_fuzz)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SourceError, StageError, NondeterministicExecution, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_ERROR
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_ERROR
