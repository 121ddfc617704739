from fractions import Fraction

import pytest

from builder import Project, block, define, call, flag, if_, move, touching
from finder_cases import all_projects
from scratchlint.metrics import METRIC_NAMES, compute_metrics, unit_complexity
from scratchlint.project import represented_block_ids


def test_level_demo(level_demo):
    m = compute_metrics(level_demo)
    assert m.as_dict() == {
        "blockCount": 5,
        "scriptCount": 1,
        "spriteCount": 1,
        "procedureCount": 0,
        "looseScriptCount": 0,
        "weightedMeanComplexity": 2.0,
    }
    assert list(m.as_dict()) == list(METRIC_NAMES)


def test_hand_counted():
    p = Project()
    cat = p.sprite("Cat")
    both = block("operator_and", OPERAND1=touching(), OPERAND2=touching("_mouse_"))
    cat.script(flag(), if_(both, move()), call("jump"))
    cat.procedure(define("jump", [], move()))
    cat.script(move())
    p.sprite("Dog")
    m = compute_metrics(p.parse())
    # hat, if, and, 2x touching, move, call | define, move | loose move
    assert m.block_count == 7 + 2 + 1
    assert (m.script_count, m.procedure_count, m.loose_script_count, m.sprite_count) == (1, 1, 1, 2)
    # script: 1 + if + and = 3; procedure: 1
    assert m.weighted_mean_complexity == Fraction(4, 2)


def test_empty_project():
    m = compute_metrics(Project().parse())
    assert m.block_count == 0
    assert m.weighted_mean_complexity == 0


def test_complexity_of_nested_decisions():
    p = Project()
    p.sprite("Cat").script(
        flag(),
        block("control_repeat_until", CONDITION=touching(), SUBSTACK=[if_(touching(), move())]),
        block("control_wait_until", CONDITION=block("operator_not", OPERAND=touching())),
    )
    script = p.parse().sprites[0].scripts[0]
    # until + if + wait until + not
    assert unit_complexity(script) == 5


@pytest.mark.parametrize("name,project", list(all_projects()))
def test_block_count_matches_represented_blocks(name, project):
    program = project.parse()
    assert compute_metrics(program).block_count == len(represented_block_ids(program))
