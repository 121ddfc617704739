"""Depth-first, pre-order traversal of a :class:`Program`.

Visitors subclass :class:`Visitor` and define methods for the node kinds they
care about: ``visit_<StatementKind>`` / ``visit_<ExpressionKind>`` for a
specific kind (``visit_IfElse``, ``visit_Answer``), or ``visit_statement`` /
``visit_expression`` to see every statement or expression.  The specific
method runs first, then the generic one.
"""

from __future__ import annotations

from typing import Optional

from .nodes import ActorDefinition, Expression, ProcedureDefinition, Program, Script, Statement


class Visitor:
    def __init__(self):
        self.program: Optional[Program] = None
        self.actor: Optional[ActorDefinition] = None
        self.script: Optional[Script] = None
        self.procedure: Optional[ProcedureDefinition] = None
        # enclosing statements of the node being visited, outermost first
        self.parents: list[Statement] = []
        self.statement: Optional[Statement] = None

    @property
    def unit(self):
        return self.script if self.script is not None else self.procedure

    def visit_program(self, program: Program) -> None:
        pass

    def visit_actor(self, actor: ActorDefinition) -> None:
        pass

    def visit_script(self, script: Script) -> None:
        pass

    def visit_procedure(self, procedure: ProcedureDefinition) -> None:
        pass

    def visit_statement(self, stmt: Statement) -> None:
        pass

    def visit_expression(self, expr: Expression) -> None:
        pass

    def leave_actor(self, actor: ActorDefinition) -> None:
        pass


def traverse(program: Program, visitor: Visitor) -> None:
    visitor.program = program
    visitor.visit_program(program)
    for actor in program.actors:
        visitor.actor = actor
        visitor.visit_actor(actor)
        for script in actor.scripts:
            visitor.script, visitor.procedure = script, None
            visitor.visit_script(script)
            for expr in script.event.inputs:
                _expression(visitor, expr)
            if script.expression is not None:
                _expression(visitor, script.expression)
            _statements(visitor, script.body)
        for proc in actor.procedures:
            visitor.script, visitor.procedure = None, proc
            visitor.visit_procedure(proc)
            _statements(visitor, proc.body)
        visitor.script = visitor.procedure = None
        visitor.leave_actor(actor)
    visitor.actor = None


def _statements(visitor: Visitor, stmts) -> None:
    for stmt in stmts:
        visitor.statement = stmt
        specific = getattr(visitor, "visit_" + stmt.kind, None)
        if specific is not None:
            specific(stmt)
        visitor.visit_statement(stmt)
        for expr in stmt.inputs:
            visitor.statement = stmt
            _expression(visitor, expr)
        visitor.parents.append(stmt)
        for stack in stmt.substacks:
            _statements(visitor, stack)
        visitor.parents.pop()
    visitor.statement = visitor.parents[-1] if visitor.parents else None


def _expression(visitor: Visitor, expr: Expression) -> None:
    specific = getattr(visitor, "visit_" + expr.kind, None)
    if specific is not None:
        specific(expr)
    visitor.visit_expression(expr)
    for child in expr.operands:
        _expression(visitor, child)
