"""Control-flow graph, event reachability and dataflow analysis."""

from .cfg import CfgEdge, CfgNode, ControlFlowGraph, EdgeKind, NodeKind, build_cfg, is_terminal, to_dot
from .dataflow import DataflowFact, DataflowProblem, definitely_defined, definitions, uses
from .events import reachable_event_edges

__all__ = [
    "CfgEdge",
    "CfgNode",
    "ControlFlowGraph",
    "DataflowFact",
    "DataflowProblem",
    "EdgeKind",
    "NodeKind",
    "build_cfg",
    "definitely_defined",
    "definitions",
    "is_terminal",
    "reachable_event_edges",
    "to_dot",
    "uses",
]
