"""Parse Scratch 3.0 ``project.json`` documents into the AST in :mod:`.nodes`."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import replace
from typing import Any, Optional

from . import opcodes as op
from .nodes import (
    NEVER,
    ActorDefinition,
    Event,
    EventKind,
    Expression,
    ListDecl,
    Parameter,
    ParamKind,
    ProcedureDefinition,
    Program,
    Scope,
    Script,
    Statement,
    VariableDecl,
)

log = logging.getLogger(__name__)

_PLACEHOLDER = re.compile(r"%[sbn]")


class MalformedProject(ValueError):
    """The document cannot be turned into a Program at all."""

    def __init__(self, message: str, block_id: Optional[str] = None):
        super().__init__(message)
        self.block_id = block_id


def parse_project(
    json_text,
    *,
    name: str = "project",
    project_id: Optional[int] = None,
    source_path: Optional[str] = None,
) -> Program:
    """Parse ``project.json`` text (str or bytes) into a :class:`Program`."""
    try:
        data = json.loads(json_text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedProject(f"not valid JSON: {exc}") from exc
    return parse_project_data(data, name=name, project_id=project_id, source_path=source_path)


def parse_project_data(
    data: Any,
    *,
    name: str = "project",
    project_id: Optional[int] = None,
    source_path: Optional[str] = None,
) -> Program:
    if not isinstance(data, dict) or not isinstance(data.get("targets"), list):
        raise MalformedProject("missing 'targets' array")
    targets = [t for t in data["targets"] if isinstance(t, dict)]
    stages = [t for t in targets if t.get("isStage") is True]
    if not stages:
        raise MalformedProject("no stage target")
    if len(stages) > 1:
        raise MalformedProject("more than one stage target")

    diagnostics: list[str] = []
    stage_target = stages[0]
    stage = _TargetParser(stage_target, True, diagnostics).parse()
    sprites = [
        _TargetParser(t, False, diagnostics).parse() for t in targets if t is not stage_target
    ]
    stage = _declare_missing_broadcasts(stage, sprites, diagnostics)
    return Program(
        name=name,
        stage=stage,
        sprites=tuple(sprites),
        project_id=project_id,
        source_path=source_path,
        diagnostics=tuple(diagnostics),
    )


def decode_input(raw_input, slot: str = "text", blocks: Optional[dict] = None) -> Expression:
    """Decode one entry of a block's ``inputs`` map.

    ``blocks`` is the owning target's block map, needed when the input refers to
    another block by id.
    """
    parser = _TargetParser({"blocks": blocks or {}}, False, [])
    return parser.decode(raw_input, slot)


def _declare_missing_broadcasts(stage, sprites, diagnostics):
    declared = {bid for actor in (stage, *sprites) for bid, _ in actor.broadcasts}
    declared_names = {name for actor in (stage, *sprites) for _, name in actor.broadcasts}
    missing = []
    for actor in (stage, *sprites):
        for ref_id, ref_name in _broadcast_refs(actor):
            if ref_id in declared or (ref_id is None and ref_name in declared_names):
                continue
            key = ref_id or f"broadcast:{ref_name}"
            declared.add(key)
            declared_names.add(ref_name)
            missing.append((key, ref_name))
            diagnostics.append(f"undeclared broadcast {ref_name!r} added to stage")
    if not missing:
        return stage
    return replace(stage, broadcasts=stage.broadcasts + tuple(missing))


def _broadcast_refs(actor):
    for unit in actor.units():
        if isinstance(unit, Script) and unit.event.kind is EventKind.RECEPTION_OF_MESSAGE:
            yield unit.event.ref_id, unit.event.param
        for stmt in unit.statements():
            for expr in stmt.expressions():
                if expr.kind == "BroadcastRef" and expr.value is not None:
                    yield expr.ref_id, expr.value


def _text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def _json_list(value) -> list:
    if isinstance(value, list):
        return value
    if isinstance(value, str):
        try:
            decoded = json.loads(value)
        except json.JSONDecodeError:
            return []
        return decoded if isinstance(decoded, list) else []
    return []


class _TargetParser:
    def __init__(self, target: dict, is_stage: bool, diagnostics: list[str]):
        self.target = target
        self.is_stage = is_stage
        blocks = target.get("blocks")
        self.blocks: dict = blocks if isinstance(blocks, dict) else {}
        self.diagnostics = diagnostics
        self.visited: set[str] = set()
        self.active: set[str] = set()

    # -- actor level -------------------------------------------------------

    def parse(self) -> ActorDefinition:
        scripts: list[Script] = []
        procedures: list[ProcedureDefinition] = []
        for bid, block in self.blocks.items():
            if bid in self.visited or not self._is_top(block):
                continue
            self._parse_top(bid, scripts, procedures)
        # blocks not reachable from any top-level block become loose scripts
        for bid, block in self.blocks.items():
            if bid in self.visited or not self._is_real(block):
                continue
            self._parse_top(self._climb(bid), scripts, procedures)

        scope = Scope.GLOBAL if self.is_stage else Scope.LOCAL
        variables = []
        raw_vars = self.target.get("variables")
        for vid, entry in (raw_vars.items() if isinstance(raw_vars, dict) else ()):
            entry = entry if isinstance(entry, list) else [entry]
            vname = _text(entry[0]) if entry else ""
            initial = entry[1] if len(entry) > 1 else None
            if isinstance(initial, (list, dict)):
                initial = _text(initial)
            variables.append(VariableDecl(str(vid), vname, initial, scope))
        lists = []
        raw_lists = self.target.get("lists")
        for lid, entry in (raw_lists.items() if isinstance(raw_lists, dict) else ()):
            entry = entry if isinstance(entry, list) else [entry]
            lists.append(ListDecl(str(lid), _text(entry[0]) if entry else "", scope))
        raw_broadcasts = self.target.get("broadcasts")
        broadcasts = tuple(
            (str(k), _text(v)) for k, v in (raw_broadcasts.items() if isinstance(raw_broadcasts, dict) else ())
        )
        costume_index = self.target.get("currentCostume")
        return ActorDefinition(
            name=_text(self.target.get("name")),
            is_stage=self.is_stage,
            variables=tuple(variables),
            lists=tuple(lists),
            broadcasts=broadcasts,
            scripts=tuple(scripts),
            procedures=tuple(procedures),
            costume_names=self._asset_names("costumes"),
            sound_names=self._asset_names("sounds"),
            current_costume_index=costume_index if isinstance(costume_index, int) else 0,
        )

    def _asset_names(self, key) -> tuple[str, ...]:
        raw = self.target.get(key)
        if not isinstance(raw, list):
            return ()
        return tuple(_text(a.get("name")) for a in raw if isinstance(a, dict))

    @staticmethod
    def _is_real(block) -> bool:
        """Non-shadow entries of the block map (top-level primitives count as blocks)."""
        if isinstance(block, list):
            return True
        return isinstance(block, dict) and block.get("shadow") is not True

    def _is_top(self, block) -> bool:
        if isinstance(block, list):
            return True
        if not self._is_real(block):
            return False
        if "topLevel" in block:
            return block["topLevel"] is True
        return block.get("parent") is None

    def _climb(self, bid: str) -> str:
        seen = {bid}
        while True:
            block = self.blocks[bid]
            parent = block.get("parent") if isinstance(block, dict) else None
            if (
                not isinstance(parent, str)
                or parent in seen
                or parent in self.visited
                or not self._is_real(self.blocks.get(parent))
            ):
                return bid
            seen.add(parent)
            bid = parent

    def _parse_top(self, bid, scripts, procedures):
        block = self.blocks[bid]
        if isinstance(block, list):
            self.visited.add(bid)
            expr = self._primitive(block, "text", block_id=bid)
            scripts.append(Script(NEVER, (), bid, expression=expr))
            return
        opcode = block.get("opcode") if isinstance(block.get("opcode"), str) else ""
        if opcode == op.PROCEDURE_DEFINITION:
            procedures.append(self._procedure(bid, block))
        elif opcode in op.HAT_OPCODES or op.is_extension_hat(opcode):
            scripts.append(self._hat_script(bid, block, opcode))
        elif opcode in op.REPORTERS and not block.get("next"):
            scripts.append(Script(NEVER, (), bid, expression=self._expr_ref(bid, "text")))
        else:
            scripts.append(Script(NEVER, self._chain(bid), bid))

    def _hat_script(self, bid, block, opcode) -> Script:
        self.visited.add(bid)
        self.active.add(bid)
        try:
            fields = self._fields(block)
            inputs, _ = self._all_inputs(block, {})
            kind = EventKind(op.HAT_OPCODES[opcode]) if opcode in op.HAT_OPCODES else EventKind.OTHER
            param = None
            ref = None
            if kind is EventKind.KEY_PRESSED:
                param = _field_value(fields, "KEY_OPTION")
            elif kind is EventKind.BACKDROP_SWITCH_TO:
                param = _field_value(fields, "BACKDROP")
            elif kind is EventKind.RECEPTION_OF_MESSAGE:
                param = _field_value(fields, "BROADCAST_OPTION")
                ref = _field_ref(fields, "BROADCAST_OPTION")
            elif kind is EventKind.GREATER_THAN:
                param = _field_value(fields, "WHENGREATERTHANMENU")
            event = Event(kind, param, tuple(inputs), opcode, ref)
            body = self._chain(block.get("next"))
        finally:
            self.active.discard(bid)
        return Script(event, body, bid)

    def _procedure(self, bid, block) -> ProcedureDefinition:
        self.visited.add(bid)
        self.active.add(bid)
        header = [bid]
        proccode, names, warp = "", [], False
        try:
            raw = (block.get("inputs") or {}).get("custom_block") if isinstance(block.get("inputs"), dict) else None
            proto_id = raw[1] if isinstance(raw, list) and len(raw) > 1 and isinstance(raw[1], str) else None
            proto = self.blocks.get(proto_id) if proto_id else None
            if isinstance(proto, dict) and proto_id not in self.visited:
                self.visited.add(proto_id)
                if proto.get("shadow") is not True:
                    header.append(proto_id)
                mutation = proto.get("mutation") if isinstance(proto.get("mutation"), dict) else {}
                proccode = _text(mutation.get("proccode"))
                names = [_text(n) for n in _json_list(mutation.get("argumentnames"))]
                warp = mutation.get("warp") in (True, "true")
                proto_inputs = proto.get("inputs") if isinstance(proto.get("inputs"), dict) else {}
                for value in proto_inputs.values():
                    arg_id = value[1] if isinstance(value, list) and len(value) > 1 else None
                    arg = self.blocks.get(arg_id) if isinstance(arg_id, str) else None
                    if isinstance(arg, dict) and arg_id not in self.visited:
                        self.visited.add(arg_id)
                        if arg.get("shadow") is not True:
                            header.append(arg_id)
            kinds = [
                ParamKind.BOOLEAN if m == "%b" else ParamKind.STRING_NUMBER
                for m in _PLACEHOLDER.findall(proccode)
            ]
            kinds += [ParamKind.STRING_NUMBER] * (len(names) - len(kinds))
            params = tuple(Parameter(n, k) for n, k in zip(names, kinds))
            body = self._chain(block.get("next"))
        finally:
            self.active.discard(bid)
        return ProcedureDefinition(proccode, params, body, warp, bid, tuple(header))

    # -- statements --------------------------------------------------------

    def _chain(self, bid) -> tuple[Statement, ...]:
        stmts = []
        chain = []
        try:
            while isinstance(bid, str):
                if bid in self.active:
                    raise MalformedProject(f"cyclic block chain at block {bid!r}", bid)
                block = self.blocks.get(bid)
                if bid in self.visited or not isinstance(block, dict) or block.get("shadow") is True:
                    break
                self.active.add(bid)
                chain.append(bid)
                stmts.append(self._statement(bid, block))
                bid = block.get("next")
        finally:
            self.active.difference_update(chain)
        return tuple(stmts)

    def _statement(self, bid, block) -> Statement:
        self.visited.add(bid)
        opcode = block.get("opcode") if isinstance(block.get("opcode"), str) else ""
        if opcode == op.PROCEDURE_CALL:
            return self._call(bid, block)
        spec = op.STATEMENTS.get(opcode)
        if spec is None:
            stacks = sorted(k for k in self._inputs(block) if k.startswith("SUBSTACK"))
            inputs, names = self._all_inputs(block, {}, skip=set(stacks))
            substacks = tuple(self._chain(self._stack_target(block, k)) for k in stacks)
            return Statement(
                op.UNKNOWN_OPCODE, opcode, bid, tuple(inputs), tuple(names), self._fields(block), substacks
            )
        slots = dict(spec.inputs)
        inputs, names = self._all_inputs(block, slots, skip=set(spec.substacks))
        substacks = tuple(self._chain(self._stack_target(block, k)) for k in spec.substacks)
        return Statement(spec.kind, opcode, bid, tuple(inputs), tuple(names), self._fields(block, spec.fields), substacks)

    def _call(self, bid, block) -> Statement:
        mutation = block.get("mutation") if isinstance(block.get("mutation"), dict) else {}
        proccode = _text(mutation.get("proccode"))
        arg_ids = [_text(a) for a in _json_list(mutation.get("argumentids"))]
        marks = _PLACEHOLDER.findall(proccode)
        slots = {aid: ("bool" if i < len(marks) and marks[i] == "%b" else "text") for i, aid in enumerate(arg_ids)}
        inputs, names = self._all_inputs(block, slots)
        return Statement(
            op.CALL_PROCEDURE, op.PROCEDURE_CALL, bid, tuple(inputs), tuple(names), self._fields(block), (), proccode
        )

    def _stack_target(self, block, key):
        raw = self._inputs(block).get(key)
        if isinstance(raw, list) and len(raw) > 1 and isinstance(raw[1], str):
            return raw[1]
        return None

    @staticmethod
    def _inputs(block) -> dict:
        inputs = block.get("inputs")
        return inputs if isinstance(inputs, dict) else {}

    def _all_inputs(self, block, slots: dict, skip=frozenset()):
        """Decode declared slots in declaration order, then any extra inputs."""
        raw = self._inputs(block)
        exprs, names = [], []
        for key, slot in slots.items():
            exprs.append(self.decode(raw.get(key), slot))
            names.append(key)
        for key, value in raw.items():
            if key in slots or key in skip:
                continue
            exprs.append(self.decode(value, "text"))
            names.append(key)
        return exprs, names

    def _fields(self, block, order=()):
        raw = block.get("fields")
        raw = raw if isinstance(raw, dict) else {}
        result = []
        for key in list(order) + [k for k in raw if k not in order]:
            if key not in raw:
                continue
            value = raw[key]
            if isinstance(value, list):
                text = _text(value[0]) if value else ""
                ref = _text(value[1]) if len(value) > 1 and value[1] is not None else None
            else:
                text, ref = _text(value), None
            result.append((key, text, ref))
        return tuple(result)

    # -- expressions -------------------------------------------------------

    def decode(self, raw, slot: str) -> Expression:
        if not isinstance(raw, list) or len(raw) < 2:
            return _empty(slot)
        value = raw[1]
        if isinstance(value, str):
            return self._expr_ref(value, slot)
        if isinstance(value, list):
            return self._primitive(value, slot)
        return _empty(slot)

    def _expr_ref(self, bid: str, slot: str) -> Expression:
        if bid in self.active:
            raise MalformedProject(f"cyclic block reference at block {bid!r}", bid)
        block = self.blocks.get(bid)
        if block is None or bid in self.visited:
            if block is not None:
                self.diagnostics.append(f"block {bid!r} referenced more than once")
            return _empty(slot)
        if isinstance(block, list):
            self.visited.add(bid)
            return self._primitive(block, slot, block_id=bid)
        if not isinstance(block, dict):
            return _empty(slot)
        self.visited.add(bid)
        if block.get("shadow") is True:
            return self._fold_shadow(block, slot)
        self.active.add(bid)
        try:
            return self._reporter(bid, block)
        finally:
            self.active.discard(bid)

    def _fold_shadow(self, block, slot) -> Expression:
        opcode = block.get("opcode") if isinstance(block.get("opcode"), str) else ""
        fields = self._fields(block)
        if opcode in op.LITERAL_SHADOWS:
            fname, kind = op.LITERAL_SHADOWS[opcode]
            value = _field_value(fields, fname)
            ref = _field_ref(fields, fname)
            return Expression(kind, value=value or "", ref_id=ref, opcode=opcode)
        if fields:
            _, value, ref = fields[0]
            return Expression("StringLiteral", value=value, ref_id=ref, opcode=opcode, is_menu=True, fields=fields)
        return _empty(slot)

    def _reporter(self, bid, block) -> Expression:
        opcode = block.get("opcode") if isinstance(block.get("opcode"), str) else ""
        if opcode in op.LITERAL_SHADOWS:
            folded = self._fold_shadow(block, "text")
            return Expression(folded.kind, value=folded.value, ref_id=folded.ref_id, block_id=bid, opcode=opcode)
        spec = op.REPORTERS.get(opcode)
        if spec is None:
            operands, names = self._all_inputs(block, {})
            return Expression(
                "Reporter",
                operands=tuple(operands),
                operand_names=tuple(names),
                block_id=bid,
                opcode=opcode,
                fields=self._fields(block),
            )
        fields = self._fields(block, spec.fields)
        operands, names = self._all_inputs(block, dict(spec.inputs))
        common = dict(block_id=bid, opcode=opcode, fields=fields, operands=tuple(operands), operand_names=tuple(names))
        if spec.kind == "Comparison":
            return Expression("Comparison", op=op.COMPARISON_OPS[opcode], **common)
        if spec.kind == "BoolOp":
            return Expression("BoolOp", op=op.BOOL_OPS[opcode], **common)
        if spec.kind == "VariableRef":
            return Expression("VariableRef", value=_field_value(fields, "VARIABLE"), ref_id=_field_ref(fields, "VARIABLE"), **common)
        if spec.kind == "ListRef":
            return Expression("ListRef", value=_field_value(fields, "LIST"), ref_id=_field_ref(fields, "LIST"), **common)
        if spec.kind == "ParameterRef":
            kind = ParamKind.BOOLEAN if spec.boolean else ParamKind.STRING_NUMBER
            return Expression("ParameterRef", value=_field_value(fields, "VALUE"), param_kind=kind, **common)
        if spec.kind == "Answer":
            return Expression("Answer", **common)
        return Expression("Reporter", **common)

    def _primitive(self, value: list, slot: str, block_id: Optional[str] = None) -> Expression:
        code = value[0] if value else None
        kind = op.PRIMITIVE_KINDS.get(code) if isinstance(code, int) and not isinstance(code, bool) else None
        text = _text(value[1]) if len(value) > 1 else ""
        if kind is None:
            raw = text if len(value) > 1 else json.dumps(value)
            self.diagnostics.append(f"UnknownInputCode {code!r}")
            log.debug("unknown input code %r", code)
            return Expression("StringLiteral", value=raw, block_id=block_id)
        ref = _text(value[2]) if len(value) > 2 and kind in ("BroadcastRef", "VariableRef", "ListRef") else None
        return Expression(kind, value=text, ref_id=ref, block_id=block_id)


def _empty(slot: str) -> Expression:
    return Expression("EmptyBool" if slot == "bool" else "EmptyNumber")


def _field_value(fields, name) -> Optional[str]:
    for key, value, _ in fields:
        if key == name:
            return value
    return None


def _field_ref(fields, name) -> Optional[str]:
    for key, _, ref in fields:
        if key == name:
            return ref
    return None
