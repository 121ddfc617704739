"""Scratch-specific bugs: misuse of the Scratch runtime and its resources."""

from __future__ import annotations

from ..flow.events import literal_text
from ..project.nodes import EventKind
from .base import Category, Finder, register

MOVEMENT = frozenset({"MoveSteps", "TurnRight", "TurnLeft", "ChangeXBy", "ChangeYBy"})
_BACKDROP_WILDCARDS = frozenset({"next backdrop", "previous backdrop", "random backdrop"})


@register
class MissingBackdropSwitch(Finder):
    id = "missing_backdrop_switch"
    category = Category.SCRATCH_BUG
    summary = "Backdrop switch event never triggered"

    def visit_script(self, script):
        event = script.event
        if event.kind is EventKind.BACKDROP_SWITCH_TO and not self.context.triggers.fires(self.actor, event):
            self.report([script.top_block_id], backdrop=event.param or "")


class _PenUsage(Finder):
    """Program-wide pen checks, reported once at the first offending block."""

    category = Category.SCRATCH_BUG
    wanted = ""
    absent = ""

    def check(self):
        first = None
        seen_absent = False
        for actor in self.context.program.actors:
            for unit in actor.units():
                for stmt in unit.statements():
                    if stmt.kind == self.wanted and first is None:
                        first = (actor, unit, stmt)
                    if stmt.kind == self.absent:
                        seen_absent = True
        if first is not None and not seen_absent:
            actor, unit, stmt = first
            self.report([stmt.block_id], actor=actor, top=unit.top_block_id)
        return self.issues


@register
class MissingEraseAll(_PenUsage):
    id = "missing_erase_all"
    summary = "Pen lines are not erased"
    wanted, absent = "PenDown", "EraseAll"


@register
class MissingPenDown(_PenUsage):
    id = "missing_pen_down"
    summary = "Pen is up but never down"
    wanted, absent = "PenUp", "PenDown"


@register
class MissingPenUp(_PenUsage):
    id = "missing_pen_up"
    summary = "Pen is down but never up"
    wanted, absent = "PenDown", "PenUp"


@register
class MissingResource(Finder):
    id = "missing_resource"
    category = Category.SCRATCH_BUG
    summary = "Used costume, sound or background is missing"

    def visit_statement(self, stmt):
        assets = self.context.assets
        stage = self.program.stage.name
        if stmt.kind == "SwitchCostumeTo":
            name = literal_text(stmt.input("COSTUME"))
            if name is not None and not assets.has_costume(self.actor.name, name):
                self.report([stmt.block_id], resource=name, kind="costume")
        elif stmt.kind in ("StartSound", "PlaySoundUntilDone"):
            name = literal_text(stmt.input("SOUND_MENU"))
            if name is not None and not assets.has_sound(self.actor.name, name):
                self.report([stmt.block_id], resource=name, kind="sound")
        elif stmt.kind in ("SwitchBackdropTo", "SwitchBackdropToAndWait"):
            name = literal_text(stmt.input("BACKDROP"))
            if name is not None and name not in _BACKDROP_WILDCARDS and not assets.has_costume(stage, name):
                self.report([stmt.block_id], resource=name, kind="backdrop")


@register
class StutteringMovement(Finder):
    id = "stuttering_movement"
    category = Category.SCRATCH_BUG
    summary = "Annoying typematic delay when moving with a key press"

    def visit_script(self, script):
        if script.event.kind is EventKind.KEY_PRESSED and len(script.body) == 1 and script.body[0].kind in MOVEMENT:
            self.report([script.top_block_id, script.body[0].block_id], key=script.event.param or "")
