"""Each finder fires on its positive fixture and stays quiet on its clean one."""

import pytest

from finder_cases import CLEAN, POSITIVE
from scratchlint.finders.base import Context, FinderConfig, finder_ids, run_finder
from scratchlint.project import inventory_from_program


def issues_of(fid, project):
    program = project.parse()
    context = Context(program, inventory_from_program(program), FinderConfig())
    return run_finder(fid, context)


def shape(issues):
    return sorted((i.actor, tuple(sorted(i.block_ids))) for i in issues)


def test_every_finder_has_fixtures():
    assert set(POSITIVE) == set(finder_ids())
    assert set(CLEAN) == set(finder_ids())


@pytest.mark.parametrize("fid", sorted(POSITIVE))
def test_positive(fid):
    project, expected = POSITIVE[fid]()
    got = issues_of(fid, project)
    assert shape(got) == sorted((a, tuple(sorted(ids))) for a, ids in expected)
    assert all(i.finder_id == fid for i in got)


@pytest.mark.parametrize("fid", sorted(CLEAN))
def test_clean(fid):
    assert issues_of(fid, CLEAN[fid]()) == []


@pytest.mark.parametrize("locale", ["en", "de", "es"])
def test_hints_render_for_every_positive(locale):
    from scratchlint.reporting import render_hint

    for fid, make in sorted(POSITIVE.items()):
        project, _ = make()
        for issue in issues_of(fid, project):
            text = render_hint(issue, locale)
            assert text and "{" not in text, (fid, text)


def test_empty_project_only_reports_itself():
    from builder import Project
    from scratchlint.finders.base import run_all

    assert [i.finder_id for i in run_all(Project().parse())] == ["empty_project"]


def test_clean_sprite_has_no_issues():
    from builder import Project, flag, say
    from scratchlint.finders.base import run_all

    p = Project()
    p.sprite("Cat").script(flag(), say("hi"))
    program = p.parse()
    assert run_all(program, inventory_from_program(program)) == []
