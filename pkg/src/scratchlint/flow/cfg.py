"""Statement-level control-flow graph over a whole program.

Every statement gets one node; every script and procedure gets a synthetic
Entry and Exit node, and the program has a single Start node.  Inter-script
control transfer (green flag, broadcasts, backdrop switches, clone creation)
is modelled with EVENT edges; custom block calls use CALL/RETURN edges.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..project.nodes import ActorDefinition, EventKind, ProcedureDefinition, Program, Script, Statement
from .events import (
    ALWAYS_FIRES,
    BACKDROP_SWITCHES,
    backdrop_target,
    broadcast_message,
    clone_target,
    message_key,
)


class EdgeKind(str, Enum):
    SEQ = "SEQ"
    BRANCH_TRUE = "BRANCH_TRUE"
    BRANCH_FALSE = "BRANCH_FALSE"
    LOOP_BACK = "LOOP_BACK"
    LOOP_EXIT = "LOOP_EXIT"
    EVENT = "EVENT"
    CALL = "CALL"
    RETURN = "RETURN"


class NodeKind(str, Enum):
    START = "Start"
    ENTRY = "Entry"
    EXIT = "Exit"
    STATEMENT = "Statement"


LOOPS = frozenset({"RepeatTimes", "RepeatUntil", "Forever"})
CONDITIONALS = frozenset({"IfThen", "IfElse"})


def is_terminal(stmt: Statement) -> bool:
    """Statements after which control never continues in the same script."""
    if stmt.kind == "DeleteThisClone":
        return True
    return stmt.kind == "Stop" and stmt.stop_option in ("ALL", "THIS_SCRIPT")


@dataclass(frozen=True)
class CfgNode:
    index: int
    kind: NodeKind
    actor: Optional[str] = None
    block_id: Optional[str] = None
    opcode: Optional[str] = None
    statement: Optional[Statement] = None
    unit: object = None

    @property
    def label(self) -> str:
        if self.kind is NodeKind.STATEMENT:
            return f"{self.opcode} {self.block_id}"
        if self.kind is NodeKind.START:
            return "Start"
        return f"{self.kind.value} {self.block_id}"


@dataclass(frozen=True)
class CfgEdge:
    source: int
    target: int
    kind: EdgeKind


class ControlFlowGraph:
    def __init__(self, program: Program):
        self.program = program
        self.nodes: list[CfgNode] = []
        self.edges: list[CfgEdge] = []
        self._edge_set: set = set()
        self.successors: dict[int, list[CfgEdge]] = defaultdict(list)
        self.predecessors: dict[int, list[CfgEdge]] = defaultdict(list)
        self._actor_index = {id(a): i for i, a in enumerate(program.actors)}
        self._by_block: dict[tuple[int, str], int] = {}
        self._entries: dict[int, int] = {}
        self._exits: dict[int, int] = {}
        self.start = self._add(CfgNode(0, NodeKind.START))

    # -- construction helpers ----------------------------------------------

    def _add(self, node: CfgNode) -> int:
        index = len(self.nodes)
        self.nodes.append(CfgNode(index, node.kind, node.actor, node.block_id, node.opcode, node.statement, node.unit))
        return index

    def add_edge(self, source: int, target: int, kind: EdgeKind) -> None:
        key = (source, target, kind)
        if key in self._edge_set:
            return
        self._edge_set.add(key)
        edge = CfgEdge(source, target, kind)
        self.edges.append(edge)
        self.successors[source].append(edge)
        self.predecessors[target].append(edge)

    # -- lookups -----------------------------------------------------------

    def node_for(self, actor: ActorDefinition, block_id: str) -> Optional[int]:
        return self._by_block.get((self._actor_index[id(actor)], block_id))

    def entry(self, unit) -> int:
        return self._entries[id(unit)]

    def exit(self, unit) -> int:
        return self._exits[id(unit)]

    def has_edge(self, source: int, target: int, kind: Optional[EdgeKind] = None) -> bool:
        if kind is not None:
            return (source, target, kind) in self._edge_set
        return any(e.target == target for e in self.successors.get(source, ()))

    def succ(self, node: int) -> list[int]:
        return [e.target for e in self.successors.get(node, ())]

    def pred(self, node: int) -> list[int]:
        return [e.source for e in self.predecessors.get(node, ())]

    def reachable(self, roots=None) -> set[int]:
        """Nodes reachable from ``roots`` (default: the Start node) over all edges."""
        stack = list(roots) if roots is not None else [self.start]
        seen = set(stack)
        while stack:
            node = stack.pop()
            for edge in self.successors.get(node, ()):
                if edge.target not in seen:
                    seen.add(edge.target)
                    stack.append(edge.target)
        return seen

    def __len__(self) -> int:
        return len(self.nodes)


class _Builder:
    def __init__(self, program: Program):
        self.program = program
        self.cfg = ControlFlowGraph(program)
        # per actor: proccode -> first matching procedure
        self.procs: dict[int, dict[str, ProcedureDefinition]] = {}
        # statement nodes of loose scripts; they never run, so fire no events
        self.loose: set[int] = set()

    def build(self) -> ControlFlowGraph:
        cfg = self.cfg
        for ai, actor in enumerate(self.program.actors):
            table: dict[str, ProcedureDefinition] = {}
            for proc in actor.procedures:
                table.setdefault(proc.proccode, proc)
            self.procs[ai] = table
            for unit in actor.units():
                cfg._entries[id(unit)] = cfg._add(CfgNode(0, NodeKind.ENTRY, actor.name, unit.top_block_id, None, None, unit))
                cfg._exits[id(unit)] = cfg._add(CfgNode(0, NodeKind.EXIT, actor.name, unit.top_block_id, None, None, unit))
        for ai, actor in enumerate(self.program.actors):
            for unit in actor.units():
                self._unit(ai, actor, unit)
        self._events()
        return cfg

    def _unit(self, ai, actor, unit) -> None:
        cfg = self.cfg
        exit_node = cfg.exit(unit)
        before = len(cfg.nodes)
        first, _ = self._wire(ai, actor, unit.body, (exit_node, EdgeKind.SEQ))
        cfg.add_edge(cfg.entry(unit), first, EdgeKind.SEQ)
        if isinstance(unit, Script) and unit.is_loose:
            self.loose.update(range(before, len(cfg.nodes)))

    def _wire(self, ai, actor, stmts, follow):
        """Wire a statement list so that it continues at ``follow``; return its entry."""
        cfg = self.cfg
        nodes = []
        for stmt in stmts:
            node = cfg._add(CfgNode(0, NodeKind.STATEMENT, actor.name, stmt.block_id, stmt.opcode, stmt))
            cfg._by_block[(ai, stmt.block_id)] = node
            nodes.append(node)
        for stmt, node in zip(reversed(stmts), reversed(nodes)):
            self._statement(ai, actor, stmt, node, follow)
            follow = (node, EdgeKind.SEQ)
        return follow

    def _statement(self, ai, actor, stmt, node, follow) -> None:
        cfg = self.cfg
        target, kind = follow
        if is_terminal(stmt):
            return
        if stmt.kind == "IfThen":
            body, _ = self._wire(ai, actor, stmt.body, follow)
            cfg.add_edge(node, body, EdgeKind.BRANCH_TRUE)
            cfg.add_edge(node, target, EdgeKind.BRANCH_FALSE)
        elif stmt.kind == "IfElse":
            then_node, _ = self._wire(ai, actor, stmt.substacks[0] if stmt.substacks else (), follow)
            else_node, _ = self._wire(ai, actor, stmt.substacks[1] if len(stmt.substacks) > 1 else (), follow)
            cfg.add_edge(node, then_node, EdgeKind.BRANCH_TRUE)
            cfg.add_edge(node, else_node, EdgeKind.BRANCH_FALSE)
        elif stmt.kind in LOOPS:
            body, body_kind = self._wire(ai, actor, stmt.body, (node, EdgeKind.LOOP_BACK))
            cfg.add_edge(node, body, body_kind)
            if stmt.kind != "Forever":
                cfg.add_edge(node, target, EdgeKind.LOOP_EXIT)
        elif stmt.kind == "UnknownOpcode" and stmt.substacks:
            # opaque C-block: any of its stacks may run, or none
            for stack in stmt.substacks:
                inner, inner_kind = self._wire(ai, actor, stack, follow)
                cfg.add_edge(node, inner, inner_kind)
            cfg.add_edge(node, target, kind)
        elif stmt.kind == "CallProcedure" and stmt.proccode in self.procs[ai]:
            proc = self.procs[ai][stmt.proccode]
            cfg.add_edge(node, cfg.entry(proc), EdgeKind.CALL)
            cfg.add_edge(cfg.exit(proc), target, EdgeKind.RETURN)
        else:
            cfg.add_edge(node, target, kind)

    def _events(self) -> None:
        cfg = self.cfg
        handlers: dict[EventKind, list[tuple[ActorDefinition, Script]]] = defaultdict(list)
        for actor in self.program.actors:
            for script in actor.scripts:
                if not script.is_loose:
                    handlers[script.event.kind].append((actor, script))
        for kind in sorted(ALWAYS_FIRES, key=lambda k: k.value):
            for _, script in handlers.get(kind, ()):
                cfg.add_edge(cfg.start, cfg.entry(script), EdgeKind.EVENT)
        receivers = handlers.get(EventKind.RECEPTION_OF_MESSAGE, ())
        backdrops = handlers.get(EventKind.BACKDROP_SWITCH_TO, ())
        clones = handlers.get(EventKind.STARTED_AS_CLONE, ())
        for node in list(cfg.nodes):
            stmt = node.statement
            if stmt is None or node.index in self.loose:
                continue
            if stmt.kind in ("Broadcast", "BroadcastAndWait"):
                message = broadcast_message(stmt)
                for _, script in receivers:
                    if message is None or message_key(script.event.param) == message_key(message):
                        cfg.add_edge(node.index, cfg.entry(script), EdgeKind.EVENT)
            elif stmt.kind in BACKDROP_SWITCHES:
                name = backdrop_target(stmt)
                for _, script in backdrops:
                    if name is None or script.event.param == name:
                        cfg.add_edge(node.index, cfg.entry(script), EdgeKind.EVENT)
            elif stmt.kind == "CreateCloneOf":
                actor = self.program.actor(node.actor)
                name = clone_target(stmt, actor)
                for owner, script in clones:
                    if not owner.is_stage and (name is None or owner.name == name):
                        cfg.add_edge(node.index, cfg.entry(script), EdgeKind.EVENT)


def build_cfg(program: Program) -> ControlFlowGraph:
    return _Builder(program).build()


def to_dot(cfg: ControlFlowGraph) -> str:
    """Graphviz rendering; node labels are opcode plus block id."""
    lines = ["digraph cfg {", "  node [shape=box, fontname=monospace];"]
    for node in cfg.nodes:
        label = node.label if node.actor is None else f"{node.actor}: {node.label}"
        label = label.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{node.index} [label="{label}"];')
    for edge in cfg.edges:
        lines.append(f'  n{edge.source} -> n{edge.target} [label="{edge.kind.value}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
