"""Which handler events can be triggered by statements of the program."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..project.nodes import ActorDefinition, EventKind, Expression, Program, Statement

ALWAYS_FIRES = frozenset(
    {
        EventKind.GREEN_FLAG,
        EventKind.KEY_PRESSED,
        EventKind.SPRITE_CLICKED,
        EventKind.GREATER_THAN,
        EventKind.OTHER,
    }
)

_BACKDROP_WILDCARDS = frozenset({"next backdrop", "previous backdrop", "random backdrop"})


def message_key(name: Optional[str]) -> str:
    """Broadcast names match case-insensitively, as in the Scratch runtime."""
    return (name or "").casefold()


def literal_text(expr: Optional[Expression]) -> Optional[str]:
    """Text of a literal or menu value; None for computed inputs."""
    if expr is None:
        return None
    if expr.kind in ("StringLiteral", "NumberLiteral", "BroadcastRef") and expr.value is not None:
        return expr.value
    return None


def broadcast_message(stmt: Statement) -> Optional[str]:
    """Literal message of a Broadcast/BroadcastAndWait, None when computed."""
    return literal_text(stmt.input("BROADCAST_INPUT"))


def backdrop_target(stmt: Statement) -> Optional[str]:
    """Backdrop name a switch statement selects; None when any backdrop may result."""
    if stmt.kind == "NextBackdrop":
        return None
    name = literal_text(stmt.input("BACKDROP"))
    if name is None or name in _BACKDROP_WILDCARDS:
        return None
    return name


def clone_target(stmt: Statement, actor: ActorDefinition) -> Optional[str]:
    """Actor name a CreateCloneOf statement clones; None when computed."""
    name = literal_text(stmt.input("CLONE_OPTION"))
    if name == "_myself_":
        return actor.name
    return name


@dataclass
class Triggers:
    messages: set = field(default_factory=set)
    any_message: bool = False
    backdrops: set = field(default_factory=set)
    any_backdrop: bool = False
    clone_targets: set = field(default_factory=set)
    any_clone: bool = False

    def fires(self, actor: ActorDefinition, event) -> bool:
        kind = event.kind
        if kind in ALWAYS_FIRES:
            return True
        if kind is EventKind.RECEPTION_OF_MESSAGE:
            return self.any_message or message_key(event.param) in self.messages
        if kind is EventKind.BACKDROP_SWITCH_TO:
            return self.any_backdrop or event.param in self.backdrops
        if kind is EventKind.STARTED_AS_CLONE:
            return not actor.is_stage and (self.any_clone or actor.name in self.clone_targets)
        return False


BROADCASTS = frozenset({"Broadcast", "BroadcastAndWait"})
BACKDROP_SWITCHES = frozenset({"SwitchBackdropTo", "SwitchBackdropToAndWait", "NextBackdrop"})


def _live_statements(actor):
    # loose code never runs, so it triggers nothing
    for unit in actor.units():
        if not getattr(unit, "is_loose", False):
            yield from unit.statements()


def collect_triggers(program: Program) -> Triggers:
    triggers = Triggers()
    for actor in program.actors:
        for stmt in _live_statements(actor):
            if stmt.kind in BROADCASTS:
                message = broadcast_message(stmt)
                if message is None:
                    triggers.any_message = True
                else:
                    triggers.messages.add(message_key(message))
            elif stmt.kind in BACKDROP_SWITCHES:
                target = backdrop_target(stmt)
                if target is None:
                    triggers.any_backdrop = True
                else:
                    triggers.backdrops.add(target)
            elif stmt.kind == "CreateCloneOf":
                target = clone_target(stmt, actor)
                if target is None:
                    triggers.any_clone = True
                else:
                    triggers.clone_targets.add(target)
    return triggers


def reachable_event_edges(program: Program) -> set:
    """``(actor name, event, fired)`` for every handler script in the program.

    The actor is part of the key because clone events are per actor.
    """
    triggers = collect_triggers(program)
    result = set()
    for actor in program.actors:
        for script in actor.scripts:
            if script.is_loose:
                continue
            result.add((actor.name, script.event, triggers.fires(actor, script.event)))
    return result
