"""Immutable AST node types for parsed Scratch 3.0 projects."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union


class Scope(str, Enum):
    GLOBAL = "GLOBAL"
    LOCAL = "LOCAL"


class ParamKind(str, Enum):
    STRING_NUMBER = "STRING_NUMBER"
    BOOLEAN = "BOOLEAN"


class EventKind(str, Enum):
    GREEN_FLAG = "GreenFlag"
    KEY_PRESSED = "KeyPressed"
    SPRITE_CLICKED = "SpriteClicked"
    BACKDROP_SWITCH_TO = "BackdropSwitchTo"
    RECEPTION_OF_MESSAGE = "ReceptionOfMessage"
    STARTED_AS_CLONE = "StartedAsClone"
    GREATER_THAN = "GreaterThan"
    # hat blocks of non-pen extensions; always considered able to fire
    OTHER = "Other"
    NEVER = "Never"


LITERAL_KINDS = frozenset({"NumberLiteral", "StringLiteral", "BoolLiteral"})
EMPTY_KINDS = frozenset({"EmptyBool", "EmptyNumber"})


@dataclass(frozen=True)
class Expression:
    kind: str
    value: Optional[str] = None
    operands: tuple["Expression", ...] = ()
    operand_names: tuple[str, ...] = ()
    block_id: Optional[str] = None
    opcode: Optional[str] = None
    ref_id: Optional[str] = None
    op: Optional[str] = None
    fields: tuple[tuple[str, str, Optional[str]], ...] = ()
    param_kind: Optional[ParamKind] = None
    is_menu: bool = False

    @property
    def is_literal(self) -> bool:
        return self.kind in LITERAL_KINDS

    @property
    def is_empty(self) -> bool:
        return self.kind in EMPTY_KINDS

    def operand(self, name: str) -> Optional["Expression"]:
        for key, expr in zip(self.operand_names, self.operands):
            if key == name:
                return expr
        return None

    def field(self, name: str) -> Optional[str]:
        for key, value, _ in self.fields:
            if key == name:
                return value
        return None

    def walk(self):
        """Yield this expression and all nested operands, pre-order."""
        yield self
        for child in self.operands:
            yield from child.walk()

    def number(self) -> Optional[float]:
        """Numeric value of a literal, or None when it does not parse as a number."""
        if self.value is None or not self.value.strip():
            return None
        try:
            return float(self.value)
        except ValueError:
            return None


@dataclass(frozen=True)
class Statement:
    kind: str
    opcode: str
    block_id: str
    inputs: tuple[Expression, ...] = ()
    input_names: tuple[str, ...] = ()
    fields: tuple[tuple[str, str, Optional[str]], ...] = ()
    substacks: tuple[tuple["Statement", ...], ...] = ()
    proccode: Optional[str] = None

    def input(self, name: str) -> Optional[Expression]:
        for key, expr in zip(self.input_names, self.inputs):
            if key == name:
                return expr
        return None

    def field(self, name: str) -> Optional[str]:
        for key, value, _ in self.fields:
            if key == name:
                return value
        return None

    def field_id(self, name: str) -> Optional[str]:
        for key, _, ref in self.fields:
            if key == name:
                return ref
        return None

    @property
    def body(self) -> tuple["Statement", ...]:
        return self.substacks[0] if self.substacks else ()

    @property
    def stop_option(self) -> Optional[str]:
        """ALL, THIS_SCRIPT or OTHER_SCRIPTS for Stop statements."""
        if self.kind != "Stop":
            return None
        option = (self.field("STOP_OPTION") or "").lower()
        if option == "all":
            return "ALL"
        if option == "this script":
            return "THIS_SCRIPT"
        return "OTHER_SCRIPTS"

    def walk(self):
        """Yield this statement and every nested statement, pre-order."""
        yield self
        for stack in self.substacks:
            for stmt in stack:
                yield from stmt.walk()

    def expressions(self):
        """Yield every expression directly owned by this statement (not nested statements)."""
        for expr in self.inputs:
            yield from expr.walk()


StatementList = tuple[Statement, ...]


@dataclass(frozen=True)
class Event:
    kind: EventKind
    param: Optional[str] = None
    inputs: tuple[Expression, ...] = ()
    opcode: Optional[str] = None
    ref_id: Optional[str] = None

    @property
    def value(self) -> Optional[Expression]:
        """Threshold expression of a GreaterThan hat."""
        return self.inputs[0] if self.inputs else None

    def __str__(self) -> str:
        return self.kind.value if self.param is None else f"{self.kind.value}({self.param})"


NEVER = Event(EventKind.NEVER)


@dataclass(frozen=True)
class Script:
    event: Event
    body: StatementList
    top_block_id: str
    # a reporter lying around on its own (loose scripts only)
    expression: Optional[Expression] = None

    @property
    def is_loose(self) -> bool:
        return self.event.kind is EventKind.NEVER

    def statements(self):
        for stmt in self.body:
            yield from stmt.walk()


@dataclass(frozen=True)
class Parameter:
    name: str
    kind: ParamKind


@dataclass(frozen=True)
class ProcedureDefinition:
    proccode: str
    parameters: tuple[Parameter, ...]
    body: StatementList
    warp: bool
    definition_block_id: str
    # definition plus non-shadow prototype/argument blocks
    header_block_ids: tuple[str, ...] = ()

    @property
    def top_block_id(self) -> str:
        return self.definition_block_id

    def statements(self):
        for stmt in self.body:
            yield from stmt.walk()


@dataclass(frozen=True)
class VariableDecl:
    id: str
    name: str
    initial_value: Union[str, float, int, bool, None]
    scope: Scope


@dataclass(frozen=True)
class ListDecl:
    id: str
    name: str
    scope: Scope


@dataclass(frozen=True)
class ActorDefinition:
    name: str
    is_stage: bool
    variables: tuple[VariableDecl, ...] = ()
    lists: tuple[ListDecl, ...] = ()
    broadcasts: tuple[tuple[str, str], ...] = ()
    scripts: tuple[Script, ...] = ()
    procedures: tuple[ProcedureDefinition, ...] = ()
    costume_names: tuple[str, ...] = ()
    sound_names: tuple[str, ...] = ()
    current_costume_index: int = 0

    def units(self):
        """Scripts and procedures in declaration order."""
        yield from self.scripts
        yield from self.procedures

    def statements(self):
        for unit in self.units():
            yield from unit.statements()


@dataclass(frozen=True)
class Program:
    name: str
    stage: ActorDefinition
    sprites: tuple[ActorDefinition, ...] = ()
    project_id: Optional[int] = None
    source_path: Optional[str] = None
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    @property
    def actors(self) -> tuple[ActorDefinition, ...]:
        return (self.stage, *self.sprites)

    def actor(self, name: str) -> Optional[ActorDefinition]:
        for actor in self.actors:
            if actor.name == name:
                return actor
        return None

    def global_variables(self) -> tuple[VariableDecl, ...]:
        return self.stage.variables

    def visible_variables(self, actor: ActorDefinition) -> tuple[VariableDecl, ...]:
        if actor.is_stage:
            return actor.variables
        return actor.variables + self.stage.variables

    def resolve_variable(self, actor: ActorDefinition, var_id, name) -> Optional[VariableDecl]:
        """Find the declaration a reference points at: by id first, then by name."""
        visible = self.visible_variables(actor)
        if var_id:
            for decl in visible:
                if decl.id == var_id:
                    return decl
        if name is not None:
            for decl in visible:
                if decl.name == name:
                    return decl
        return None


Unit = Union[Script, ProcedureDefinition]


def represented_block_ids(program: Program) -> list[str]:
    """Every non-shadow block id that the AST holds a node for, in traversal order.

    Hats and procedure headers are included alongside statements and
    block-backed expressions.
    """
    ids: list[str] = []

    def expr_ids(expr: Expression):
        for node in expr.walk():
            if node.block_id is not None:
                ids.append(node.block_id)

    for actor in program.actors:
        for script in actor.scripts:
            if not script.is_loose:
                ids.append(script.top_block_id)
            for expr in script.event.inputs:
                expr_ids(expr)
            if script.expression is not None:
                expr_ids(script.expression)
            for stmt in script.statements():
                ids.append(stmt.block_id)
                for expr in stmt.inputs:
                    expr_ids(expr)
        for proc in actor.procedures:
            ids.extend(proc.header_block_ids)
            for stmt in proc.statements():
                ids.append(stmt.block_id)
                for expr in stmt.inputs:
                    expr_ids(expr)
    return ids
