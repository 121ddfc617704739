"""Syntax errors: code the editor lets you build but that cannot work."""

from __future__ import annotations

import re
from collections import Counter, defaultdict

from ..project.opcodes import REPORTERS, STATEMENTS
from ..project.nodes import Expression, ParamKind, Statement
from .base import Category, Finder, register

_PLACEHOLDER = re.compile(r"%[sbn]")


@register
class AmbiguousCustomBlockSignature(Finder):
    id = "ambiguous_custom_block_signature"
    category = Category.SYNTAX_ERROR
    summary = "Several custom blocks have identical hats"

    def visit_actor(self, actor):
        groups = defaultdict(list)
        for proc in actor.procedures:
            groups[proc.proccode].append(proc)
        for proccode, procs in groups.items():
            if len(procs) > 1:
                self.report([p.definition_block_id for p in procs], top=procs[0].top_block_id, proccode=proccode)


@register
class AmbiguousParameterName(Finder):
    id = "ambiguous_parameter_name"
    category = Category.SYNTAX_ERROR
    summary = "Custom block has parameters with identical name"

    def visit_procedure(self, procedure):
        counts = Counter(p.name for p in procedure.parameters)
        duplicated = sorted(name for name, n in counts.items() if n > 1)
        if duplicated:
            self.report([procedure.definition_block_id], name=", ".join(duplicated), proccode=procedure.proccode)


@register
class CallWithoutDefinition(Finder):
    id = "call_without_definition"
    category = Category.SYNTAX_ERROR
    summary = "Non existing custom block is called"

    def visit_CallProcedure(self, stmt):
        if not any(p.proccode == stmt.proccode for p in self.actor.procedures):
            self.report([stmt.block_id], proccode=stmt.proccode or "")


@register
class ExpressionAsTouchingOrColor(Finder):
    id = "expression_as_touching_or_color"
    category = Category.SYNTAX_ERROR
    summary = "Reporter is used in color or object spot"

    def visit_statement(self, stmt):
        spec = STATEMENTS.get(stmt.opcode)
        if spec is not None:
            self._check(dict(spec.inputs), stmt.input_names, stmt.inputs, stmt.block_id)

    def visit_expression(self, expr):
        spec = REPORTERS.get(expr.opcode or "")
        if spec is not None and expr.block_id is not None:
            self._check(dict(spec.inputs), expr.operand_names, expr.operands, expr.block_id)

    def _check(self, slots, names, exprs, owner):
        for name, expr in zip(names, exprs):
            slot = slots.get(name)
            if slot not in ("color", "touch") or expr.block_id is None:
                continue
            if slot == "color" and expr.kind == "ColorLiteral":
                continue
            self.report([owner], slot="color" if slot == "color" else "object")


def _bool_slots(names, slots) -> list[bool]:
    return [slots.get(n) == "bool" for n in names]


@register
class IllegalParameterRefactor(Finder):
    id = "illegal_parameter_refactor"
    category = Category.SYNTAX_ERROR
    summary = "String parameter is used in bool condition"

    def visit_statement(self, stmt: Statement):
        if stmt.kind == "CallProcedure":
            marks = _PLACEHOLDER.findall(stmt.proccode or "")
            flags = [i < len(marks) and marks[i] == "%b" for i in range(len(stmt.inputs))]
        else:
            spec = STATEMENTS.get(stmt.opcode)
            flags = _bool_slots(stmt.input_names, dict(spec.inputs)) if spec else []
        self._check(stmt.inputs, flags)

    def visit_expression(self, expr: Expression):
        spec = REPORTERS.get(expr.opcode or "")
        if spec is not None:
            self._check(expr.operands, _bool_slots(expr.operand_names, dict(spec.inputs)))

    def _check(self, exprs, flags):
        for expr, is_bool in zip(exprs, flags):
            if is_bool and expr.kind == "ParameterRef" and expr.param_kind is ParamKind.STRING_NUMBER:
                self.report([expr.block_id], name=expr.value or "")


@register
class MissingTerminationCondition(Finder):
    id = "missing_termination_condition"
    category = Category.SYNTAX_ERROR
    summary = "Repeat until without condition"

    def visit_RepeatUntil(self, stmt):
        cond = stmt.input("CONDITION")
        if cond is None or cond.kind == "EmptyBool":
            self.report([stmt.block_id])


@register
class MissingWaitUntilCondition(Finder):
    id = "missing_wait_until_condition"
    category = Category.SYNTAX_ERROR
    summary = "Wait until without condition"

    def visit_WaitUntil(self, stmt):
        cond = stmt.input("CONDITION")
        if cond is None or cond.kind == "EmptyBool":
            self.report([stmt.block_id])


@register
class OrphanedParameter(Finder):
    id = "orphaned_parameter"
    category = Category.SYNTAX_ERROR
    summary = "Parameter is not defined anymore"

    def visit_ParameterRef(self, expr):
        proc = self.procedure
        if proc is not None and expr.value not in {p.name for p in proc.parameters}:
            self.report([expr.block_id], name=expr.value or "", proccode=proc.proccode)


@register
class ParameterOutOfScope(Finder):
    id = "parameter_out_of_scope"
    category = Category.SYNTAX_ERROR
    summary = "Parameter outside custom block"

    def visit_ParameterRef(self, expr):
        if self.procedure is None:
            self.report([expr.block_id], name=expr.value or "")
