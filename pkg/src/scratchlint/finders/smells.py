"""Code smells: working code that is hard to read, change or extend."""

from __future__ import annotations

import re
from collections import defaultdict
from itertools import combinations

from ..flow.events import broadcast_message
from ..project.nodes import EventKind, Scope
from . import util
from .base import Category, Finder, register

_DEFAULT_MESSAGE = re.compile(r"message\d*")
_DEFAULT_SPRITE = re.compile(r"(Sprite|Figur|Objeto)\d*")


class _Smell(Finder):
    category = Category.CODE_SMELL


@register
class BusyWaiting(_Smell):
    id = "busy_waiting"
    summary = "Constantly checking whether to stop the script"

    def visit_Forever(self, stmt):
        checks = [s for s in stmt.body if s.kind in ("IfThen", "IfElse")]
        if len(checks) != 1 or checks[0].kind != "IfThen":
            return
        body = checks[0].body
        if len(body) == 1 and body[0].kind == "Stop" and body[0].stop_option in ("ALL", "THIS_SCRIPT"):
            self.report([stmt.block_id, checks[0].block_id])


@register
class CodeLyingAround(_Smell):
    id = "code_lying_around"
    summary = "Loose blocks without handler"
    sees_loose = True

    def visit_script(self, script):
        if script.is_loose and (script.body or script.expression is not None):
            self.report([script.top_block_id])


@register
class DoubleIf(_Smell):
    id = "double_if"
    summary = "Consecutive if with same condition"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for first, second in zip(stmts, stmts[1:]):
                    if first.kind == "IfThen" and second.kind == "IfThen" and _same_condition(first, second):
                        self.report([first.block_id, second.block_id], actor=actor, top=unit.top_block_id)
        return self.issues


def _same_condition(a, b) -> bool:
    ca, cb = util.condition(a), util.condition(b)
    if ca is None or cb is None:
        return False
    return util.norm_expr(ca) == util.norm_expr(cb)


@register
class DuplicateSprite(_Smell):
    id = "duplicate_sprite"
    summary = "Two sprites are exact duplicates"

    def check(self):
        program = self.context.program
        forms = [(s, util.norm_actor_code(s)) for s in program.sprites]
        for (a, fa), (b, fb) in combinations(forms, 2):
            if fa and fa == fb:
                self.report([u.top_block_id for u in a.units()], actor=a, other=b.name)
        return self.issues


@register
class DuplicatedScript(_Smell):
    id = "duplicated_script"
    summary = "Two scripts in a sprite are exact duplicates"

    def visit_actor(self, actor):
        forms = [(s, util.norm_script(s)) for s in actor.scripts]
        for (a, fa), (b, fb) in combinations(forms, 2):
            if fa == fb:
                self.report([a.top_block_id, b.top_block_id], top=a.top_block_id)


@register
class EmptyControlBody(_Smell):
    id = "empty_control_body"
    summary = "C-block without sub stack"

    def visit_statement(self, stmt):
        if stmt.kind in ("IfThen", "IfElse") or util.is_loop(stmt):
            if not stmt.substacks or any(not stack for stack in stmt.substacks):
                self.report([stmt.block_id])


@register
class EmptyCustomBlock(_Smell):
    id = "empty_custom_block"
    summary = "Custom block without body"

    def visit_procedure(self, procedure):
        if not procedure.body:
            self.report([procedure.definition_block_id], proccode=procedure.proccode)


@register
class EmptyProject(_Smell):
    id = "empty_project"
    summary = "Project without sprites and stage scripts"

    def check(self):
        program = self.context.full_program
        stage = program.stage
        if not program.sprites and not stage.scripts and not stage.procedures:
            self.report([], actor=stage)
        return self.issues


@register
class EmptyScript(_Smell):
    id = "empty_script"
    summary = "Handler without body"

    def visit_script(self, script):
        if not script.is_loose and not script.body:
            self.report([script.top_block_id])


@register
class EmptySprite(_Smell):
    id = "empty_sprite"
    summary = "Sprite without scripts"

    def visit_actor(self, actor):
        if not actor.is_stage and not actor.scripts and not actor.procedures:
            self.report([])


@register
class LongScript(_Smell):
    id = "long_script"
    summary = "Script longer than the configured number of blocks"

    def visit_script(self, script):
        count = sum(1 for _ in script.statements()) + (0 if script.is_loose else 1)
        threshold = self.context.config.long_script_threshold
        if count > threshold:
            self.report([script.top_block_id], count=count, threshold=threshold)


@register
class MessageNaming(_Smell):
    id = "message_naming"
    summary = "Message with uncommunicative name"

    @staticmethod
    def uncommunicative(name: str) -> bool:
        return len(name) <= 1 or _DEFAULT_MESSAGE.fullmatch(name) is not None

    def visit_script(self, script):
        if script.event.kind is EventKind.RECEPTION_OF_MESSAGE:
            name = script.event.param or ""
            if self.uncommunicative(name):
                self.report([script.top_block_id], message=name)

    def visit_statement(self, stmt):
        if stmt.kind in ("Broadcast", "BroadcastAndWait"):
            name = broadcast_message(stmt)
            if name is not None and self.uncommunicative(name):
                self.report([stmt.block_id], message=name)


@register
class MiddleMan(_Smell):
    id = "middle_man"
    summary = "Broadcast reception only sends the next broadcast"
    hint_keys = ("middle_man", "middle_man_procedure")

    def visit_script(self, script):
        body = script.body
        if script.event.kind is EventKind.RECEPTION_OF_MESSAGE and len(body) == 1:
            if body[0].kind in ("Broadcast", "BroadcastAndWait"):
                self.report([script.top_block_id, body[0].block_id], message=script.event.param or "")

    def visit_procedure(self, procedure):
        body = procedure.body
        if len(body) == 1 and body[0].kind == "CallProcedure":
            self.report(
                [procedure.definition_block_id, body[0].block_id], hint_key="middle_man_procedure", proccode=procedure.proccode
            )


def modified_attribute(stmt):
    """Key of the variable or attribute a set/change statement writes, else None."""
    kind = stmt.kind
    if kind in ("SetVariable", "ChangeVariableBy"):
        return "var:" + (stmt.field_id("VARIABLE") or stmt.field("VARIABLE") or "")
    if kind in ("SetEffectTo", "ChangeEffectBy"):
        return "effect:" + (stmt.field("EFFECT") or "").lower()
    return _ATTRIBUTE_WRITERS.get(kind)


_ATTRIBUTE_WRITERS = {
    "SetX": "x",
    "ChangeXBy": "x",
    "SetY": "y",
    "ChangeYBy": "y",
    "SetSizeTo": "size",
    "ChangeSizeBy": "size",
    "PointInDirection": "direction",
    "TurnRight": "direction",
    "TurnLeft": "direction",
    "SetVolumeTo": "volume",
    "ChangeVolumeBy": "volume",
    "SetPenSizeTo": "pen size",
    "ChangePenSizeBy": "pen size",
}


def runs(stmts, key):
    """Maximal runs of consecutive statements with equal, non-None ``key``."""
    start = 0
    while start < len(stmts):
        k = key(stmts[start])
        end = start + 1
        while end < len(stmts) and k is not None and key(stmts[end]) == k:
            end += 1
        if k is not None:
            yield start, end
        start = end


@register
class MultiAttributeModification(_Smell):
    id = "multi_attribute_modification"
    summary = "Variable or attribute is changed multiple times in a row"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for start, end in runs(stmts, modified_attribute):
                    if end - start >= 2:
                        target = stmts[start].field("VARIABLE") or modified_attribute(stmts[start])
                        self.report(
                            [s.block_id for s in stmts[start:end]], actor=actor, top=unit.top_block_id, name=target
                        )
        return self.issues


@register
class NestedLoops(_Smell):
    id = "nested_loops"
    summary = "Loops without other blocks stacked in-between"

    def visit_statement(self, stmt):
        if util.is_loop(stmt) and len(stmt.body) == 1 and util.is_loop(stmt.body[0]):
            self.report([stmt.block_id, stmt.body[0].block_id])


@register
class SameVariableDifferentSprite(_Smell):
    id = "same_variable_different_sprite"
    summary = "Same variable name in multiple sprites"

    def check(self):
        owners = defaultdict(list)
        for actor in self.context.program.actors:
            for name in dict.fromkeys(v.name for v in actor.variables if v.scope is Scope.LOCAL):
                owners[name].append(actor)
        for name, actors in owners.items():
            if len(actors) >= 2:
                self.report([], actor=actors[0], name=name, sprites=", ".join(a.name for a in actors))
        return self.issues


MIN_SEQUENCE = 3


@register
class SequentialActions(_Smell):
    id = "sequential_actions"
    summary = "Sequence of repeated blocks instead of a loop"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for start, end in runs(stmts, util.norm_stmt):
                    if end - start >= MIN_SEQUENCE:
                        self.report(
                            [s.block_id for s in stmts[start:end]], actor=actor, top=unit.top_block_id, count=end - start
                        )
        return self.issues


@register
class SpriteNaming(_Smell):
    id = "sprite_naming"
    summary = "Sprite with uncommunicative name"

    def visit_actor(self, actor):
        if not actor.is_stage and _DEFAULT_SPRITE.fullmatch(actor.name):
            self.report([], name=actor.name)


@register
class UnnecessaryIfAfterUntil(_Smell):
    id = "unnecessary_if_after_until"
    summary = "If checks the same condition that terminated the repeat until"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for first, second in zip(stmts, stmts[1:]):
                    if first.kind == "RepeatUntil" and second.kind == "IfThen" and _same_condition(first, second):
                        self.report([first.block_id, second.block_id], actor=actor, top=unit.top_block_id)
        return self.issues


@register
class UnnecessaryLoop(_Smell):
    id = "unnecessary_loop"
    summary = "Loop that runs never or one time"

    def visit_RepeatTimes(self, stmt):
        times = stmt.input("TIMES")
        if times is not None and util.literal(times):
            count = times.number()
            if count is not None and count <= 1:
                self.report([stmt.block_id], times=times.value)


@register
class UnusedCustomBlock(_Smell):
    id = "unused_custom_block"
    summary = "Custom block is never called"

    def visit_actor(self, actor):
        called = {s.proccode for s in actor.statements() if s.kind == "CallProcedure"}
        for proc in actor.procedures:
            if proc.proccode not in called:
                self.report([proc.definition_block_id], top=proc.top_block_id, proccode=proc.proccode)


@register
class UnusedParameter(_Smell):
    id = "unused_parameter"
    summary = "Parameter is defined but not used"

    def visit_procedure(self, procedure):
        used = {
            e.value
            for stmt in procedure.statements()
            for e in stmt.expressions()
            if e.kind == "ParameterRef"
        }
        unused = [p.name for p in procedure.parameters if p.name not in used]
        if unused:
            self.report([procedure.definition_block_id], name=", ".join(unused), proccode=procedure.proccode)


def variable_references(program, actor):
    """Resolved variable ids referenced by the code of ``actor``."""
    refs = set()
    for unit in actor.units():
        exprs = []
        if hasattr(unit, "event"):
            exprs.extend(unit.event.inputs)
            if unit.expression is not None:
                exprs.append(unit.expression)
        for stmt in unit.statements():
            exprs.extend(stmt.inputs)
            if stmt.field("VARIABLE") is not None:
                decl = program.resolve_variable(actor, stmt.field_id("VARIABLE"), stmt.field("VARIABLE"))
                if decl is not None:
                    refs.add(decl.id)
        for expr in exprs:
            for e in expr.walk():
                if e.kind == "VariableRef":
                    decl = program.resolve_variable(actor, e.ref_id, e.value)
                    if decl is not None:
                        refs.add(decl.id)
    return refs


@register
class UnusedVariable(_Smell):
    id = "unused_variable"
    summary = "Variable is never used"

    def check(self):
        program = self.context.program
        used = set()
        for actor in program.actors:
            used |= variable_references(program, actor)
        for actor in program.actors:
            for var in actor.variables:
                if var.id not in used:
                    self.report([], actor=actor, name=var.name)
        return self.issues


@register
class VariableInitializationRace(_Smell):
    id = "variable_initialization_race"
    summary = "Variable initialized with different values in scripts with the same handler"

    def check(self):
        program = self.context.program
        # (event kind, event parameter, variable id) -> [(actor, script, statement, value)]
        sets = defaultdict(list)
        for actor in program.actors:
            for script in actor.scripts:
                if script.is_loose:
                    continue
                event = (script.event.kind.value, (script.event.param or "").casefold())
                for stmt in script.statements():
                    if stmt.kind != "SetVariable":
                        continue
                    value = stmt.input("VALUE")
                    decl = program.resolve_variable(actor, stmt.field_id("VARIABLE"), stmt.field("VARIABLE"))
                    if decl is None or not util.literal(value):
                        continue
                    sets[event + (decl.id,)].append((actor, script, stmt, value.value))
        for entries in sets.values():
            for (a1, s1, st1, v1), (a2, s2, st2, v2) in combinations(entries, 2):
                if s1 is s2 or v1 == v2:
                    continue
                name = st1.field("VARIABLE") or ""
                self.report([st1.block_id], actor=a1, top=s1.top_block_id, name=name)
                self.report([st2.block_id], actor=a2, top=s2.top_block_id, name=name)
        return self.issues
