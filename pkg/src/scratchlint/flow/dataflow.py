"""Definitely-defined analysis: a forward must-analysis over the CFG.

A name is definitely defined at a node when every path reaching the node
from an analysis source passes an absolute definition of it first.  Names
are variables (``var:<id>``) and sprite attributes (``<actor>:<attribute>``).

Sources are the Start node and every entry reached by an EVENT edge that does
not wait for its receiver (plain broadcasts, backdrop switches, clone
creation, green flag and friends): those scripts may interleave arbitrarily
with the rest of the program, so they start from the empty set.  Entries
reached only through ``broadcast and wait`` or custom block calls inherit the
facts of their callers.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterable, Optional

from .. import kernels
from ..project.nodes import ActorDefinition, Program, Statement
from .cfg import ControlFlowGraph, EdgeKind, NodeKind

ATTRIBUTES = ("x", "y", "direction", "costume", "size", "visibility", "pen")

# statement kind -> attributes it sets absolutely
ABSOLUTE = {
    "GoTo": ("x", "y"),
    "GoToXY": ("x", "y"),
    "GlideTo": ("x", "y"),
    "GlideSecsToXY": ("x", "y"),
    "SetX": ("x",),
    "SetY": ("y",),
    "PointInDirection": ("direction",),
    "PointTowards": ("direction",),
    "SwitchCostumeTo": ("costume",),
    "SetSizeTo": ("size",),
    "Show": ("visibility",),
    "Hide": ("visibility",),
    "PenDown": ("pen",),
    "PenUp": ("pen",),
}

# statement kind -> attributes it updates relative to their current value
RELATIVE = {
    "ChangeXBy": ("x",),
    "ChangeYBy": ("y",),
    "TurnRight": ("direction",),
    "TurnLeft": ("direction",),
    "ChangeSizeBy": ("size",),
    "NextCostume": ("costume",),
}


def attribute_name(actor: ActorDefinition, attribute: str) -> str:
    return f"{actor.name}:{attribute}"


def variable_name(program: Program, actor: ActorDefinition, var_id, name) -> str:
    decl = program.resolve_variable(actor, var_id, name)
    if decl is not None:
        return f"var:{decl.id}"
    return f"var:?{name}"


def definitions(program: Program, actor: ActorDefinition, stmt: Statement) -> tuple[str, ...]:
    """Names a statement defines absolutely."""
    if stmt.kind == "SetVariable":
        return (variable_name(program, actor, stmt.field_id("VARIABLE"), stmt.field("VARIABLE")),)
    if actor.is_stage:
        return ()
    return tuple(attribute_name(actor, a) for a in ABSOLUTE.get(stmt.kind, ()))


@dataclass(frozen=True)
class Use:
    name: str
    # block holding the use: the VariableRef reporter or the updating statement
    block_id: Optional[str]
    kind: str  # "read" or "update"


def uses(program: Program, actor: ActorDefinition, stmt: Statement) -> list[Use]:
    """Reads of variables and relative updates performed by one statement."""
    result = []
    for expr in stmt.expressions():
        if expr.kind == "VariableRef":
            name = variable_name(program, actor, expr.ref_id, expr.value)
            result.append(Use(name, expr.block_id or stmt.block_id, "read"))
    if stmt.kind == "ChangeVariableBy":
        name = variable_name(program, actor, stmt.field_id("VARIABLE"), stmt.field("VARIABLE"))
        result.append(Use(name, stmt.block_id, "update"))
    elif not actor.is_stage:
        for attribute in RELATIVE.get(stmt.kind, ()):
            result.append(Use(attribute_name(actor, attribute), stmt.block_id, "update"))
    return result


def analysis_sources(cfg: ControlFlowGraph) -> list[int]:
    sources = {cfg.start}
    for edge in cfg.edges:
        if edge.kind is not EdgeKind.EVENT:
            continue
        origin = cfg.nodes[edge.source]
        if origin.statement is not None and origin.statement.kind == "BroadcastAndWait":
            continue
        sources.add(edge.target)
    return sorted(sources)


@dataclass
class DataflowProblem:
    """Flat encoding of the analysis, as consumed by the solver kernels."""

    names: list[str]
    gen: list[frozenset]
    sources: list[int]

    @classmethod
    def from_cfg(cls, cfg: ControlFlowGraph) -> "DataflowProblem":
        program = cfg.program
        gens = []
        universe = set()
        for node in cfg.nodes:
            defined: frozenset = frozenset()
            if node.kind is NodeKind.STATEMENT:
                actor = program.actor(node.actor)
                defined = frozenset(definitions(program, actor, node.statement))
            gens.append(defined)
            universe |= defined
        for node in cfg.nodes:
            if node.kind is NodeKind.STATEMENT:
                actor = program.actor(node.actor)
                universe.update(u.name for u in uses(program, actor, node.statement))
        return cls(sorted(universe), gens, analysis_sources(cfg))


@dataclass(frozen=True)
class DataflowFact:
    names: tuple[str, ...]
    defined_in: tuple[Optional[frozenset], ...]

    def defined_at(self, node: int) -> Optional[frozenset]:
        """Names definitely defined on entry to ``node``; None when unreachable."""
        return self.defined_in[node]

    def is_defined(self, node: int, name: str) -> bool:
        value = self.defined_in[node]
        return value is not None and name in value


def definitely_defined(cfg: ControlFlowGraph, order: Optional[Iterable[int]] = None, impl=None) -> DataflowFact:
    """Solve the analysis with the worklist kernel.

    ``order`` fixes the initial worklist order (any permutation of the nodes
    gives the same fixpoint); ``impl`` selects a kernel backend module.
    """
    problem = DataflowProblem.from_cfg(cfg)
    n = len(cfg.nodes)
    nbits = len(problem.names)
    words = max(1, (nbits + 63) // 64)
    bit = {name: i for i, name in enumerate(problem.names)}

    gen = array("Q", bytes(8 * n * words))
    for node, defined in enumerate(problem.gen):
        for name in defined:
            i = bit[name]
            gen[node * words + i // 64] |= 1 << (i % 64)
    pred_ptr, pred_idx = _csr(n, cfg.pred)
    succ_ptr, succ_idx = _csr(n, cfg.succ)
    source_set = set(problem.sources)
    is_source = array("B", [1 if i in source_set else 0 for i in range(n)])
    order_arr = kernels.index_array(range(n) if order is None else order)

    ins = kernels.solve_must(
        n, words, nbits, pred_ptr, pred_idx, succ_ptr, succ_idx, is_source, gen, order_arr, impl=impl
    )
    reachable = cfg.reachable()
    names = tuple(problem.names)
    result = []
    for node in range(n):
        if node not in reachable:
            result.append(None)
            continue
        value = 0
        for w in range(words):
            value |= ins[node * words + w] << (64 * w)
        result.append(frozenset(names[i] for i in range(nbits) if value >> i & 1))
    return DataflowFact(names, tuple(result))


def _csr(n, neighbours):
    ptr = [0]
    idx = []
    for node in range(n):
        idx.extend(neighbours(node))
        ptr.append(len(idx))
    return kernels.index_array(ptr), kernels.index_array(idx)
