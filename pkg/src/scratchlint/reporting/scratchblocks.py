"""Plain-text rendering of scripts in scratchblocks syntax."""

from __future__ import annotations

import re
from typing import Iterable, Optional

from ..project import opcodes as op
from ..project.nodes import EventKind, Expression, ProcedureDefinition, Script, Statement

MARKER = " // <- ISSUE"

_SLOT = re.compile(r"\{([A-Za-z0-9_]+)\}")
_PLACEHOLDER = re.compile(r"%[sbn]")


def _escape(text: Optional[str], chars: str) -> str:
    text = "" if text is None else str(text)
    for ch in "\\" + chars:
        text = text.replace(ch, "\\" + ch)
    return text


def _fill(template: str, lookup) -> str:
    return _SLOT.sub(lambda m: lookup(m.group(1)), template)


def expression(expr: Expression) -> str:
    kind = expr.kind
    if kind == "NumberLiteral":
        return f"({_escape(expr.value, '()')})"
    if kind == "StringLiteral":
        if expr.is_menu:
            return f"({_escape(expr.value, '()')} v)"
        return f"[{_escape(expr.value, '[]')}]"
    if kind == "BroadcastRef":
        return f"({_escape(expr.value, '()')} v)"
    if kind == "ColorLiteral":
        return f"[{_escape(expr.value, '[]')}]"
    if kind == "BoolLiteral":
        return f"<{_escape(expr.value, '<>')}>"
    if kind == "EmptyBool":
        return "<>"
    if kind == "EmptyNumber":
        return "()"
    if kind == "VariableRef":
        return f"({_escape(expr.value, '()')})"
    if kind == "ListRef":
        return f"({_escape(expr.value, '()')} :: list)"
    if kind == "ParameterRef":
        name = _escape(expr.value, "()<>")
        if expr.param_kind is not None and expr.param_kind.value == "BOOLEAN":
            return f"<{name} :: custom-arg>"
        return f"({name} :: custom-arg)"
    spec = op.REPORTERS.get(expr.opcode or "")
    if spec is None:
        return f"({expr.opcode} :: grey)"

    def lookup(name):
        sub = expr.operand(name)
        if sub is not None:
            return expression(sub)
        return _escape(expr.field(name), "[]")

    text = _fill(spec.template, lookup)
    return f"<{text}>" if spec.boolean else f"({text})"


def hat(script: Script) -> str:
    event = script.event
    param = _escape(event.param, "[]")
    if event.kind is EventKind.GREEN_FLAG:
        return "when green flag clicked"
    if event.kind is EventKind.KEY_PRESSED:
        return f"when [{param} v] key pressed"
    if event.kind is EventKind.SPRITE_CLICKED:
        return "when stage clicked" if event.opcode == "event_whenstageclicked" else "when this sprite clicked"
    if event.kind is EventKind.BACKDROP_SWITCH_TO:
        return f"when backdrop switches to [{param} v]"
    if event.kind is EventKind.RECEPTION_OF_MESSAGE:
        return f"when I receive [{param} v]"
    if event.kind is EventKind.STARTED_AS_CLONE:
        return "when I start as a clone"
    if event.kind is EventKind.GREATER_THAN:
        value = expression(event.value) if event.value is not None else "()"
        return f"when [{param} v] > {value}"
    return f"{event.opcode} :: hat grey"


def define_line(proc: ProcedureDefinition) -> str:
    params = iter(proc.parameters)

    def slot(match):
        param = next(params, None)
        name = _escape(param.name if param else "", "()<>")
        return f"<{name}>" if match.group(0) == "%b" else f"({name})"

    return "define " + _PLACEHOLDER.sub(slot, proc.proccode)


def _call_line(stmt: Statement) -> str:
    args = iter(stmt.inputs)

    def slot(match):
        arg = next(args, None)
        if arg is None:
            return "<>" if match.group(0) == "%b" else "()"
        return expression(arg)

    return _PLACEHOLDER.sub(slot, stmt.proccode or "") + " ::custom"


def statement_line(stmt: Statement) -> str:
    if stmt.kind == op.CALL_PROCEDURE:
        return _call_line(stmt)
    spec = op.STATEMENTS.get(stmt.opcode)
    if spec is None:
        parts = [stmt.opcode] + [expression(e) for e in stmt.inputs]
        return " ".join(parts) + " :: grey"

    def lookup(name):
        expr = stmt.input(name)
        if expr is not None:
            return expression(expr)
        return _escape(stmt.field(name), "[]")

    return _fill(spec.template, lookup)


def _highlighted(block_ids: Iterable[Optional[str]], highlights) -> bool:
    return any(b is not None and b in highlights for b in block_ids)


def _stmt_ids(stmt: Statement):
    yield stmt.block_id
    for expr in stmt.expressions():
        yield expr.block_id


def _lines(stmts, highlights, out: list) -> None:
    for stmt in stmts:
        line = statement_line(stmt)
        if _highlighted(_stmt_ids(stmt), highlights):
            line += MARKER
        out.append(line)
        stacks = stmt.substacks or tuple(() for _ in _declared_substacks(stmt))
        if not stacks:
            continue
        for n, stack in enumerate(stacks):
            if n:
                out.append("else")
            _lines(stack, highlights, out)
        out.append("end")


def _declared_substacks(stmt: Statement) -> tuple:
    spec = op.STATEMENTS.get(stmt.opcode)
    return spec.substacks if spec is not None else ()


def render_unit(unit, highlights=frozenset()) -> str:
    """Render a script or custom block definition; highlighted blocks get a marker."""
    highlights = frozenset(highlights)
    out: list[str] = []
    if isinstance(unit, ProcedureDefinition):
        line = define_line(unit)
        if _highlighted(unit.header_block_ids or (unit.definition_block_id,), highlights):
            line += MARKER
        out.append(line)
    elif not unit.is_loose:
        ids = [unit.top_block_id] + [e.block_id for i in unit.event.inputs for e in i.walk()]
        line = hat(unit)
        if _highlighted(ids, highlights):
            line += MARKER
        out.append(line)
    elif unit.expression is not None:
        line = expression(unit.expression)
        if _highlighted((e.block_id for e in unit.expression.walk()), highlights):
            line += MARKER
        out.append(line)
    _lines(unit.body, highlights, out)
    return "\n".join(out)


def render_scratchblocks(script, highlight_block_ids=frozenset()) -> str:
    return render_unit(script, highlight_block_ids)


def find_unit(program, actor_name: str, top_block_id: Optional[str]):
    actor = program.actor(actor_name)
    if actor is None or top_block_id is None:
        return None
    for unit in actor.units():
        if unit.top_block_id == top_block_id:
            return unit
    return None
