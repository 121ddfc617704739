"""Per-project code metrics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .project.nodes import ActorDefinition, Expression, Program

DECISION_STATEMENTS = frozenset({"IfThen", "IfElse", "RepeatUntil", "WaitUntil"})

METRIC_NAMES = (
    "blockCount",
    "scriptCount",
    "spriteCount",
    "procedureCount",
    "looseScriptCount",
    "weightedMeanComplexity",
)


@dataclass(frozen=True)
class MetricsRecord:
    block_count: int = 0
    script_count: int = 0
    sprite_count: int = 0
    procedure_count: int = 0
    loose_script_count: int = 0
    # kept exact; rendered as a decimal in reports
    weighted_mean_complexity: Fraction = Fraction(0)

    def as_dict(self) -> dict:
        return {
            "blockCount": self.block_count,
            "scriptCount": self.script_count,
            "spriteCount": self.sprite_count,
            "procedureCount": self.procedure_count,
            "looseScriptCount": self.loose_script_count,
            "weightedMeanComplexity": format_complexity(self.weighted_mean_complexity),
        }


def format_complexity(value: Fraction) -> float:
    return round(float(value), 4)


def _expr_blocks(expr: Expression) -> int:
    return sum(1 for e in expr.walk() if e.block_id is not None)


def _bool_ops(expr: Expression) -> int:
    return sum(1 for e in expr.walk() if e.kind == "BoolOp")


def unit_complexity(unit) -> int:
    """1 + decision points (conditionals, condition loops, wait-until, boolean operators)."""
    points = 0
    for stmt in unit.statements():
        if stmt.kind in DECISION_STATEMENTS:
            points += 1
        for expr in stmt.inputs:
            points += _bool_ops(expr)
    if hasattr(unit, "event"):
        for expr in unit.event.inputs:
            points += _bool_ops(expr)
    return 1 + points


@dataclass(frozen=True)
class ActorMetrics:
    block_count: int
    script_count: int
    procedure_count: int
    loose_script_count: int
    complexity_sum: int


def actor_metrics(actor: ActorDefinition) -> ActorMetrics:
    blocks = 0
    complexity = 0
    scripts = loose = 0
    for script in actor.scripts:
        if script.is_loose:
            loose += 1
        else:
            scripts += 1
            blocks += 1  # hat
            complexity += unit_complexity(script)
        for expr in script.event.inputs:
            blocks += _expr_blocks(expr)
        if script.expression is not None:
            blocks += _expr_blocks(script.expression)
        for stmt in script.statements():
            blocks += 1 + sum(_expr_blocks(e) for e in stmt.inputs)
    for proc in actor.procedures:
        blocks += 1  # definition hat
        complexity += unit_complexity(proc)
        for stmt in proc.statements():
            blocks += 1 + sum(_expr_blocks(e) for e in stmt.inputs)
    return ActorMetrics(blocks, scripts, len(actor.procedures), loose, complexity)


def combine(parts, sprite_count: int) -> MetricsRecord:
    parts = list(parts)
    scripts = sum(p.script_count for p in parts)
    procedures = sum(p.procedure_count for p in parts)
    units = scripts + procedures
    total = sum(p.complexity_sum for p in parts)
    return MetricsRecord(
        block_count=sum(p.block_count for p in parts),
        script_count=scripts,
        sprite_count=sprite_count,
        procedure_count=procedures,
        loose_script_count=sum(p.loose_script_count for p in parts),
        weighted_mean_complexity=Fraction(total, units) if units else Fraction(0),
    )


def compute_metrics(program: Program) -> MetricsRecord:
    return combine((actor_metrics(a) for a in program.actors), len(program.sprites))
