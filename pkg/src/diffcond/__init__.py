"""Difference-conditional verification of program pairs.

Given an original and a modified program over integer variables, a
difference detector builds a graph of aligned location pairs whose
divergences are tracked per variable; the graph yields a condition
automaton describing already-safe path prefixes, which a conditional
verifier (or a residual program built by the reducer) uses to check
only the behavior the change could actually have broken.
"""

from .cfa import CFA, Edge, Operation, assign, assume, check_deterministic
from .condition import (
    Condition,
    covers,
    generate_condition,
    trivial_condition,
    validate_condition,
)
from .detect_dp import DetectorConfig, assume_match, diff_dp, implies
from .detect_syn import diff_syn
from .diffgraph import (
    DifferenceGraph,
    delta_reaching_nodes,
    trace_path,
    validate_graph,
)
from .frontend import build_cfa, compile_source, parse_program, pretty_print
from .oracle import (
    ExecPath,
    NondeterministicExecution,
    OracleBounds,
    enumerate_paths,
    error_paths,
    regression_bug_paths,
    states_agree_except,
    strongest_post,
)
from .pipeline import PipelineReport, StageError, run_pipeline
from .reducer import ResidualCFA, reduce
from .report import CampaignTask, check_task, run_campaign
from .taskgen import TaskPair, TaskParams, generate_task
from .verify import Verdict, conditional_verify

__version__ = "0.1.0"

__all__ = [
    "CFA",
    "CampaignTask",
    "Condition",
    "DetectorConfig",
    "DifferenceGraph",
    "Edge",
    "ExecPath",
    "NondeterministicExecution",
    "Operation",
    "OracleBounds",
    "PipelineReport",
    "ResidualCFA",
    "StageError",
    "TaskPair",
    "TaskParams",
    "Verdict",
    "__version__",
    "assign",
    "assume",
    "assume_match",
    "build_cfa",
    "check_deterministic",
    "check_task",
    "compile_source",
    "conditional_verify",
    "covers",
    "delta_reaching_nodes",
    "diff_dp",
    "diff_syn",
    "enumerate_paths",
    "error_paths",
    "generate_condition",
    "generate_task",
    "implies",
    "parse_program",
    "pretty_print",
    "reduce",
    "regression_bug_paths",
    "run_campaign",
    "run_pipeline",
    "states_agree_except",
    "strongest_post",
    "trace_path",
    "trivial_condition",
    "validate_condition",
    "validate_graph",
]
