import csv
import io
import json
import zipfile

import pytest

from builder import Project, answer, flag, forever, move, receive, say, broadcast, if_, touching
from scratchlint.finders.base import Category, Issue, finder_ids, run_all
from scratchlint.metrics import METRIC_NAMES, compute_metrics
from scratchlint.project import inventory_from_program, parse_project
from scratchlint.reporting.hints import all_hint_keys
from scratchlint.reporting import (
    MARKER,
    BlockNotFound,
    HintCatalog,
    MissingHintKey,

    annotate_project,
    annotate_sb3,
    console_lines,
    default_catalog,
    dump_json,
    issue_counts,
    json_report,
    parse_properties,
    render_hint,
    render_unit,
    self_check,
    write_csv,
)


def level_demo_issues(program):
    return run_all(program, inventory_from_program(program))


# -- hints ------------------------------------------------------------------


def test_every_hint_key_has_english_text():
    self_check()
    assert not default_catalog().missing_keys(all_hint_keys())


def test_german_bundle_is_complete():
    catalog = default_catalog()
    assert set(catalog.bundles["de"]) >= all_hint_keys()


def test_self_check_reports_gaps():
    with pytest.raises(MissingHintKey):
        self_check(HintCatalog({"en": {"comparing_literals": "x"}}))


def test_render_english(level_demo):
    (issue,) = [i for i in level_demo_issues(level_demo) if i.finder_id == "comparing_literals"]
    assert render_hint(issue) == (
        'The values "level" and "21" are compared directly, so the result never changes. '
        "Did you mean to compare a variable or reporter instead?"
    )


def test_unknown_locale_falls_back(level_demo):
    (issue,) = [i for i in level_demo_issues(level_demo) if i.finder_id == "comparing_literals"]
    assert render_hint(issue, "xx") == render_hint(issue, "en")


def test_german_missing_ask():
    p = Project()
    p.sprite("Cat").script(flag(), say(answer()))
    program = p.parse()
    (issue,) = [i for i in run_all(program) if i.finder_id == "missing_ask"]
    assert render_hint(issue, "de").startswith('Der Block "Antwort" wird verwendet')


def test_partial_bundle_falls_back_per_key():
    catalog = HintCatalog({"en": {"a": "A {x}", "b": "B"}, "es": {"a": "a {x}"}})
    assert catalog.render("a", {"x": 1}, "es") == "a 1"
    assert catalog.render("b", {}, "es") == "B"


def test_missing_parameter_stays_visible():
    catalog = HintCatalog({"en": {"a": "value {x} and {y}"}})
    assert catalog.render("a", {"x": "1"}) == "value 1 and {y}"


def test_parse_properties():
    text = "# comment\n! other\nkey = value\nsplit=one \\\n    two\nescaped=a\\nb\n\n"
    assert parse_properties(text) == {"key": "value", "split": "one two", "escaped": "a\nb"}


# -- scratchblocks -----------------------------------------------------------


def test_level_demo_rendering(level_demo):
    script = level_demo.sprites[0].scripts[0]
    assert render_unit(script) == (
        "when green flag clicked\nforever\nif <[level] = (21)> then\nbroadcast (level 21 v)\nend\nend"
    )
    marked = render_unit(script, {"equals"}).splitlines()
    assert marked[2] == "if <[level] = (21)> then" + MARKER
    assert sum(MARKER in line for line in marked) == 1


def test_rendering_examples():
    p = Project(backdrops=["day"])
    cat = p.sprite("Cat", variables=["score"])
    from builder import call, define, param, set_var, var

    cat.script(receive("go"), set_var("score", 0), say(var("score")), call("jump %s", 5))
    cat.procedure(define("jump %s", ["h"], move(param("h"))))
    program = p.parse()
    script, proc = program.sprites[0].scripts[0], program.sprites[0].procedures[0]
    assert render_unit(script) == (
        "when I receive [go v]\nset [score v] to (0)\nsay (score)\njump (5) ::custom"
    )
    assert render_unit(proc) == "define jump (h)\nmove (h :: custom-arg) steps"


# -- CSV ------------------------------------------------------------------------


def rows(text):
    return list(csv.reader(io.StringIO(text, newline="")))


def test_csv_empty_project():
    program = Project().parse(name="empty")
    issues = run_all(program)
    text = write_csv([("empty", compute_metrics(program), issue_counts(issues))])
    assert text.endswith("\r\n") and "\n" not in text.replace("\r\n", "")
    header, row = rows(text)
    assert header == ["project", *METRIC_NAMES, *finder_ids()]
    assert row[header.index("empty_project")] == "1"
    assert row[header.index("blockCount")] == "0"


def test_csv_two_projects(level_demo):
    other = Project()
    other.sprite("Cat").script(flag(), move())
    records = []
    for name, program in (("level_demo", level_demo), ("other", other.parse(name="other"))):
        records.append((name, compute_metrics(program), issue_counts(run_all(program))))
    text = write_csv(records)
    table = rows(text)
    assert len(table) == 3
    assert [r[0] for r in table[1:]] == ["level_demo", "other"]
    assert table[1][table[0].index("comparing_literals")] == "1"


def test_csv_quotes_awkward_names():
    program = Project().parse()
    text = write_csv([('a "b", c', compute_metrics(program), {})], ids=())
    assert '"a ""b"", c"' in text


# -- JSON -------------------------------------------------------------------------


def test_json_report(level_demo):
    issues = level_demo_issues(level_demo)
    report = json_report(level_demo, issues, compute_metrics(level_demo))
    assert report["metrics"]["blockCount"] == 5
    finders = [e["finderId"] for e in report["issues"]]
    assert "comparing_literals" in finders
    entry = report["issues"][finders.index("comparing_literals")]
    assert entry["blockIds"] == ["equals"]
    assert entry["actor"] == "Elephant"
    assert entry["severity"] == Category.GENERAL_BUG.severity.value
    assert MARKER in entry["scratchblocks"]


def test_json_is_deterministic(level_demo_text):
    outputs = set()
    for _ in range(3):
        program = parse_project(level_demo_text, name="level_demo")
        issues = level_demo_issues(program)
        outputs.add(dump_json(json_report(program, list(reversed(issues)), compute_metrics(program))))
    assert len(outputs) == 1
    (text,) = outputs
    assert text.endswith("\n")
    json.loads(text)


def test_console_lines(level_demo):
    issues = [i for i in level_demo_issues(level_demo) if i.finder_id == "comparing_literals"]
    (line,) = console_lines(issues)
    assert line.startswith("[") and "comparing_literals @ Elephant/equals: " in line


# -- annotation --------------------------------------------------------------------


def test_annotate_adds_comments(level_demo, level_demo_text):
    issues = level_demo_issues(level_demo)
    doc = json.loads(annotate_project(level_demo_text, issues))
    sprite = next(t for t in doc["targets"] if not t["isStage"])
    comments = {**sprite.get("comments", {}), **next(t for t in doc["targets"] if t["isStage"]).get("comments", {})}
    assert len(comments) == len(issues)
    assert all(cid.startswith("lint_") for cid in comments)
    equals_comment = sprite["blocks"]["equals"]["comment"]
    assert comments[equals_comment]["blockId"] == "equals"
    assert "compared directly" in comments[equals_comment]["text"]
    # the original document is otherwise untouched
    original = json.loads(level_demo_text)
    assert set(sprite["blocks"]) == set(next(t for t in original["targets"] if not t["isStage"])["blocks"])


def test_annotate_stage_block():
    p = Project()
    p.stage.script(flag(), broadcast("nobody", id="sb"))
    program = p.parse()
    issues = [i for i in run_all(program) if i.finder_id == "message_never_received"]
    doc = json.loads(annotate_project(p.text(), issues))
    stage = next(t for t in doc["targets"] if t["isStage"])
    (comment,) = stage["comments"].values()
    assert comment["blockId"] == "sb"


def test_annotate_unknown_block():
    p = Project()
    p.sprite("Cat").script(flag(), move())
    bogus = Issue("comparing_literals", Category.GENERAL_BUG, "Cat", ("nope",))
    with pytest.raises(BlockNotFound):
        annotate_project(p.text(), [bogus])


def test_annotate_sb3_keeps_assets():
    p = Project()
    p.sprite("Cat", costumes=["costume1"]).script(flag(), forever(if_(touching(), say())))
    archive = p.sb3()
    program, assets = p.load_sb3()
    annotated = annotate_project(p.text(), run_all(program, assets))
    out = annotate_sb3(archive, annotated)
    with zipfile.ZipFile(io.BytesIO(archive)) as a, zipfile.ZipFile(io.BytesIO(out)) as b:
        assert set(a.namelist()) == set(b.namelist())
        for name in a.namelist():
            if name != "project.json":
                assert a.read(name) == b.read(name)
        assert json.loads(b.read("project.json")) == json.loads(annotated)
    assert annotate_sb3(archive, annotated) == out
