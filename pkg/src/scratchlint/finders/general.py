"""General bugs: mistakes that would be bugs in any programming language."""

from __future__ import annotations

from ..flow.cfg import NodeKind
from ..flow.dataflow import uses
from ..flow.events import broadcast_message, clone_target, literal_text, message_key
from ..project.nodes import EventKind, Expression
from ..project.opcodes import POSITION_REPORTERS
from . import util
from .base import Category, Finder, register


@register
class BlockingIfElse(Finder):
    id = "blocking_if_else"
    category = Category.GENERAL_BUG
    summary = "Terminates in both paths, code after if-else is never executed"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for i, stmt in enumerate(stmts[:-1]):
                    if stmt.kind == "IfElse" and len(stmt.substacks) == 2 and all(
                        util.ends_terminal(stack) for stack in stmt.substacks
                    ):
                        self.report([stmt.block_id], actor=actor, top=unit.top_block_id)
        return self.issues


@register
class ComparingLiterals(Finder):
    id = "comparing_literals"
    category = Category.GENERAL_BUG
    summary = "Strings/Numbers are compared directly"

    def visit_Comparison(self, expr: Expression):
        if len(expr.operands) == 2 and all(util.literal(e) for e in expr.operands):
            left, right = expr.operands
            self.report([expr.block_id], left=left.value or "", right=right.value or "", op=expr.op)


class _CallSiteAfter(Finder):
    """Call sites with statements after them, for procedures matching ``never_returns``."""

    category = Category.GENERAL_BUG

    def never_returns(self, proc) -> bool:
        raise NotImplementedError

    def check(self):
        for actor in self.context.program.actors:
            stuck = {p.proccode for p in actor.procedures if self.never_returns(p)}
            if not stuck:
                continue
            for unit, stmts in util.unit_lists(actor):
                for stmt in stmts[:-1]:
                    if stmt.kind == "CallProcedure" and stmt.proccode in stuck:
                        self.report([stmt.block_id], actor=actor, top=unit.top_block_id, proccode=stmt.proccode)
        return self.issues


@register
class CustomBlockWithForever(_CallSiteAfter):
    id = "custom_block_with_forever"
    summary = "Custom block ends with a forever loop; blocks after its call never execute"

    def never_returns(self, proc):
        return bool(proc.body) and proc.body[-1].kind == "Forever"


def _all_paths_stop(stmts) -> bool:
    if not stmts:
        return False
    last = stmts[-1]
    if last.kind == "Stop" and last.stop_option in ("ALL", "THIS_SCRIPT"):
        return True
    if last.kind == "IfElse" and len(last.substacks) == 2:
        return all(_all_paths_stop(s) for s in last.substacks)
    return False


@register
class CustomBlockWithTermination(_CallSiteAfter):
    id = "custom_block_with_termination"
    summary = "Custom block stops the script; blocks after its call never execute"

    def never_returns(self, proc):
        return _all_paths_stop(proc.body)


@register
class DeleteCloneAfterBroadcast(Finder):
    id = "delete_clone_after_broadcast"
    category = Category.GENERAL_BUG
    summary = "Clone is deleted immediately after broadcast"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for first, second in zip(stmts, stmts[1:]):
                    if first.kind == "Broadcast" and second.kind == "DeleteThisClone":
                        self.report(
                            [first.block_id, second.block_id],
                            actor=actor,
                            top=unit.top_block_id,
                            message=broadcast_message(first) or "",
                        )
        return self.issues


@register
class EndlessRecursion(Finder):
    id = "endless_recursion"
    category = Category.GENERAL_BUG
    summary = "Custom block or broadcast calls itself without termination"
    hint_keys = ("endless_recursion", "endless_recursion_broadcast")

    def visit_procedure(self, procedure):
        for stmt in util.unconditional(procedure.body):
            if stmt.kind == "CallProcedure" and stmt.proccode == procedure.proccode:
                self.report([stmt.block_id], proccode=procedure.proccode)
                return

    def visit_script(self, script):
        if script.event.kind is not EventKind.RECEPTION_OF_MESSAGE:
            return
        for stmt in util.unconditional(script.body):
            if stmt.kind in ("Broadcast", "BroadcastAndWait"):
                message = broadcast_message(stmt)
                if message is not None and message_key(message) == message_key(script.event.param):
                    self.report([stmt.block_id], hint_key="endless_recursion_broadcast", message=message)
                    return


@register
class ForeverInsideLoop(Finder):
    id = "forever_inside_loop"
    category = Category.GENERAL_BUG
    summary = "Forever loop inside another loop; the outer loop never repeats"

    def visit_Forever(self, stmt):
        outer = [p for p in self.parents if util.is_loop(p)]
        if outer:
            self.report([stmt.block_id, outer[-1].block_id])


@register
class InappropriateHatblock(Finder):
    id = "inappropriate_hatblock"
    category = Category.GENERAL_BUG
    summary = "Green flag handler in script with delete clone"

    def visit_DeleteThisClone(self, stmt):
        script = self.script
        if script is not None and script.event.kind is EventKind.GREEN_FLAG:
            self.report([stmt.block_id])


def _loop_contents(stmts):
    """Statements inside a loop body, not descending into nested loops."""
    for stmt in stmts:
        yield stmt
        if util.is_loop(stmt):
            continue
        for stack in stmt.substacks:
            yield from _loop_contents(stack)


@register
class InterruptedLoopSensing(Finder):
    id = "interrupted_loop_sensing"
    category = Category.GENERAL_BUG
    summary = "Block that takes time interrupts continuous sensing"

    def visit_statement(self, stmt):
        if not util.is_loop(stmt):
            return
        contents = list(_loop_contents(stmt.body))
        sensing = stmt.kind == "RepeatUntil" and util.contains_sensing(util.condition(stmt))
        sensing = sensing or any(
            s.kind in ("IfThen", "IfElse") and util.contains_sensing(util.condition(s)) for s in contents
        )
        if not sensing:
            return
        for s in contents:
            if s.kind in util.TIMED_STATEMENTS:
                self.report([s.block_id], loop=stmt.block_id, block=s.opcode)


@register
class MessageNeverReceived(Finder):
    id = "message_never_received"
    category = Category.GENERAL_BUG
    summary = "Broadcast does not trigger any handler"

    def visit_program(self, program):
        self.receivers = {
            message_key(s.event.param)
            for a in program.actors
            for s in a.scripts
            if s.event.kind is EventKind.RECEPTION_OF_MESSAGE
        }

    def visit_statement(self, stmt):
        if stmt.kind in ("Broadcast", "BroadcastAndWait") and self.script is not None and self.script.is_loose:
            return
        if stmt.kind in ("Broadcast", "BroadcastAndWait"):
            message = broadcast_message(stmt)
            if message is not None and message_key(message) not in self.receivers:
                self.report([stmt.block_id], message=message)


@register
class MessageNeverSent(Finder):
    id = "message_never_sent"
    category = Category.GENERAL_BUG
    summary = "Broadcast for handler is never sent"

    def visit_script(self, script):
        event = script.event
        if event.kind is EventKind.RECEPTION_OF_MESSAGE and not self.context.triggers.fires(self.actor, event):
            self.report([script.top_block_id], message=event.param or "")


@register
class MissingAsk(Finder):
    id = "missing_ask"
    category = Category.GENERAL_BUG
    summary = "Answer block is used but the program never asks"

    def visit_program(self, program):
        self.ask_used = any(s.kind == "AskAndWait" for _, s in util.all_statements(program))

    def visit_Answer(self, expr):
        if not self.ask_used:
            self.report([expr.block_id])


@register
class MissingCloneCall(Finder):
    id = "missing_clone_call"
    category = Category.GENERAL_BUG
    summary = "Clone event is never called"

    def visit_script(self, script):
        event = script.event
        if event.kind is EventKind.STARTED_AS_CLONE and not self.context.triggers.fires(self.actor, event):
            self.report([script.top_block_id])


@register
class MissingCloneInitialization(Finder):
    id = "missing_clone_initialization"
    category = Category.GENERAL_BUG
    summary = "Clones are created but no clone handler is used"

    def visit_CreateCloneOf(self, stmt):
        if self.script is not None and self.script.is_loose:
            return
        target = clone_target(stmt, self.actor)
        if target is None:
            return
        actor = self.program.actor(target)
        handled = actor is not None and any(s.event.kind is EventKind.STARTED_AS_CLONE for s in actor.scripts)
        if not handled:
            self.report([stmt.block_id], sprite=target)


@register
class MissingInitialization(Finder):
    id = "missing_initialization"
    category = Category.GENERAL_BUG
    summary = "Variable or sprite attribute is used before it is initialized"

    def check(self):
        program = self.context.program
        cfg = self.context.cfg
        facts = self.context.dataflow
        names = {f"var:{v.id}": v.name for a in program.actors for v in a.variables}
        tops = {
            (actor.name, stmt.block_id): unit.top_block_id
            for actor in program.actors
            for unit in actor.units()
            for stmt in unit.statements()
        }
        for node in cfg.nodes:
            if node.kind is not NodeKind.STATEMENT:
                continue
            defined = facts.defined_at(node.index)
            if defined is None:
                continue
            actor = program.actor(node.actor)
            for use in uses(program, actor, node.statement):
                if use.name not in defined:
                    label = names.get(use.name) or use.name.split(":", 1)[1].lstrip("?")
                    self.report([use.block_id], actor=actor, top=tops.get((actor.name, node.statement.block_id)), name=label)
        return self.issues


@register
class MissingLoopSensing(Finder):
    id = "missing_loop_sensing"
    category = Category.GENERAL_BUG
    summary = "Condition is checked only a single time"

    def _check(self, stmt):
        if self.procedure is not None or any(util.is_loop(p) for p in self.parents):
            return
        if util.contains_sensing(util.condition(stmt)):
            self.report([stmt.block_id])

    visit_IfThen = _check
    visit_IfElse = _check


@register
class NoWorkingScripts(Finder):
    id = "no_working_scripts"
    category = Category.GENERAL_BUG
    summary = "No handler is connected to any blocks"

    def visit_actor(self, actor):
        if actor.scripts and all(s.is_loose or not s.body for s in actor.scripts):
            self.report([s.top_block_id for s in actor.scripts], top=None)


def _is_position(expr: Expression) -> bool:
    if expr.opcode in POSITION_REPORTERS:
        return True
    return expr.opcode == "sensing_of" and expr.field("PROPERTY") in ("x position", "y position")


@register
class PositionEqualsCheck(Finder):
    id = "position_equals_check"
    category = Category.GENERAL_BUG
    summary = "Positions are compared exactly"

    def visit_Comparison(self, expr):
        if expr.op == "EQ" and any(_is_position(e) for e in expr.operands):
            self.report([expr.block_id])


@register
class RecursiveCloning(Finder):
    id = "recursive_cloning"
    category = Category.GENERAL_BUG
    summary = "Clones clone themselves without termination"

    def visit_script(self, script):
        if script.event.kind is not EventKind.STARTED_AS_CLONE:
            return
        for stmt in util.unconditional(script.body):
            if stmt.kind == "CreateCloneOf" and literal_text(stmt.input("CLONE_OPTION")) == "_myself_":
                self.report([stmt.block_id])
                return


@register
class StopAfterSay(Finder):
    id = "stop_after_say"
    category = Category.GENERAL_BUG
    summary = "Script stopped immediately after say"

    def check(self):
        for actor in self.context.program.actors:
            for unit, stmts in util.unit_lists(actor):
                for first, second in zip(stmts, stmts[1:]):
                    if first.kind == "Say" and second.kind == "Stop" and second.stop_option in ("ALL", "THIS_SCRIPT"):
                        self.report([first.block_id, second.block_id], actor=actor, top=unit.top_block_id)
        return self.issues


@register
class TerminatedLoop(Finder):
    id = "terminated_loop"
    category = Category.GENERAL_BUG
    summary = "Loop is stopped during first iteration"

    def visit_statement(self, stmt):
        if util.is_loop(stmt):
            stop = util.stops_unconditionally(stmt.body)
            if stop is not None:
                self.report([stmt.block_id, stop.block_id])


@register
class TypeErrorFinder(Finder):
    id = "type_error"
    category = Category.GENERAL_BUG
    summary = "Incompatible blocks are compared"

    def visit_Comparison(self, expr):
        if len(expr.operands) != 2 or not all(util.literal(e) for e in expr.operands):
            return
        left, right = expr.operands
        for a, b in ((left, right), (right, left)):
            if util.is_numeric_literal(a) and b.kind == "StringLiteral" and (b.value or "").strip() and b.number() is None:
                self.report([expr.block_id], left=left.value or "", right=right.value or "")
                return


@register
class VariableAsLiteral(Finder):
    id = "variable_as_literal"
    category = Category.GENERAL_BUG
    summary = "Variable name is used as a literal instead of the variable reporter"

    def visit_expression(self, expr):
        if expr.kind != "Comparison" and expr.opcode not in util.ARITHMETIC_OPCODES:
            return
        visible = {v.name for v in self.program.visible_variables(self.actor)}
        for operand in expr.operands:
            if operand.kind == "StringLiteral" and operand.value in visible:
                self.report([expr.block_id], name=operand.value)
                return
