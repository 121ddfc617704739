"""Structural helpers shared by the finders."""

from __future__ import annotations

from typing import Iterator, Optional

from ..flow.cfg import LOOPS, is_terminal
from ..project.nodes import ActorDefinition, Expression, ProcedureDefinition, Program, Script, Statement
from ..project.opcodes import SENSING_CONDITION_OPCODES

ARITHMETIC_OPCODES = frozenset(
    {"operator_add", "operator_subtract", "operator_multiply", "operator_divide", "operator_mod"}
)

TIMED_STATEMENTS = frozenset(
    {"WaitSeconds", "SayForSecs", "GlideTo", "GlideSecsToXY", "BroadcastAndWait", "AskAndWait"}
)


def norm_expr(expr: Expression) -> tuple:
    """Expression tree with block and reference ids erased."""
    return (
        expr.kind,
        expr.value,
        expr.op,
        expr.opcode,
        tuple((k, v) for k, v, _ in expr.fields),
        expr.operand_names,
        tuple(norm_expr(e) for e in expr.operands),
        expr.param_kind,
        expr.is_menu,
    )


def norm_stmt(stmt: Statement) -> tuple:
    return (
        stmt.kind,
        stmt.opcode,
        stmt.proccode,
        stmt.input_names,
        tuple(norm_expr(e) for e in stmt.inputs),
        tuple((k, v) for k, v, _ in stmt.fields),
        tuple(tuple(norm_stmt(s) for s in stack) for stack in stmt.substacks),
    )


def norm_script(script: Script) -> tuple:
    event = script.event
    return (
        "script",
        event.kind.value,
        event.param,
        event.opcode,
        tuple(norm_expr(e) for e in event.inputs),
        None if script.expression is None else norm_expr(script.expression),
        tuple(norm_stmt(s) for s in script.body),
    )


def norm_procedure(proc: ProcedureDefinition) -> tuple:
    return (
        "procedure",
        proc.proccode,
        tuple((p.name, p.kind.value) for p in proc.parameters),
        proc.warp,
        tuple(norm_stmt(s) for s in proc.body),
    )


def norm_actor_code(actor: ActorDefinition) -> tuple:
    """Order-insensitive normal form of all code of an actor."""
    units = [norm_script(s) for s in actor.scripts] + [norm_procedure(p) for p in actor.procedures]
    return tuple(sorted(units, key=repr))


def statement_lists(stmts) -> Iterator[tuple[Statement, ...]]:
    """``stmts`` and every nested sub-stack, pre-order."""
    stmts = tuple(stmts)
    yield stmts
    for stmt in stmts:
        for stack in stmt.substacks:
            yield from statement_lists(stack)


def unit_lists(actor: ActorDefinition) -> Iterator[tuple[object, tuple[Statement, ...]]]:
    for unit in actor.units():
        for stmts in statement_lists(unit.body):
            yield unit, stmts


def literal(expr: Optional[Expression]) -> bool:
    return expr is not None and expr.kind in ("NumberLiteral", "StringLiteral", "BoolLiteral")


def is_numeric_literal(expr: Expression) -> bool:
    return expr.kind == "NumberLiteral" or (expr.kind == "StringLiteral" and expr.number() is not None)


def contains_sensing(expr: Optional[Expression]) -> bool:
    if expr is None:
        return False
    return any(e.opcode in SENSING_CONDITION_OPCODES for e in expr.walk())


def condition(stmt: Statement) -> Optional[Expression]:
    return stmt.input("CONDITION")


def ends_terminal(stmts) -> bool:
    """Control never falls off the end of ``stmts``."""
    if not stmts:
        return False
    last = stmts[-1]
    if is_terminal(last) or last.kind == "Forever":
        return True
    if last.kind == "IfElse" and len(last.substacks) == 2:
        return ends_terminal(last.substacks[0]) and ends_terminal(last.substacks[1])
    return False


def stops_unconditionally(stmts, kinds=("ALL", "THIS_SCRIPT"), delete_clone: bool = True) -> Optional[Statement]:
    """First stop (or delete-clone) statement that every execution of ``stmts`` reaches."""
    for stmt in stmts:
        if stmt.kind == "Stop" and stmt.stop_option in kinds:
            return stmt
        if delete_clone and stmt.kind == "DeleteThisClone":
            return stmt
        if stmt.kind == "IfElse" and len(stmt.substacks) == 2:
            first = stops_unconditionally(stmt.substacks[0], kinds, delete_clone)
            second = stops_unconditionally(stmt.substacks[1], kinds, delete_clone)
            if first is not None and second is not None:
                return first
    return None


def unconditional(stmts) -> Iterator[Statement]:
    """Statements executed on every run of ``stmts``: top level, and inside forever."""
    for stmt in stmts:
        yield stmt
        if stmt.kind == "Forever":
            yield from unconditional(stmt.body)
            return
        if is_terminal(stmt):
            return


def is_loop(stmt: Statement) -> bool:
    return stmt.kind in LOOPS


def all_statements(program: Program) -> Iterator[tuple[ActorDefinition, Statement]]:
    for actor in program.actors:
        for stmt in actor.statements():
            yield actor, stmt
