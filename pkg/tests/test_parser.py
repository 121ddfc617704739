import copy
import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from builder import Project, block, flag, forever, if_, move, say, touching
from finder_cases import all_projects
from scratchlint.project import (
    MalformedProject,
    NoProjectJson,
    NotAnArchive,
    Visitor,
    load_sb3,
    parse_project,
    parse_project_data,
    represented_block_ids,
    traverse,
)

PROJECTS = list(all_projects())


def real_block_ids(doc):
    ids = []
    for target in doc["targets"]:
        for bid, entry in target["blocks"].items():
            if isinstance(entry, list) or not entry.get("shadow"):
                ids.append(bid)
    return ids


def test_level_demo_shape(level_demo):
    assert level_demo.stage.is_stage
    (sprite,) = level_demo.sprites
    (script,) = sprite.scripts
    assert script.top_block_id == "hat"
    forever_stmt = script.body[0]
    assert forever_stmt.kind == "Forever"
    if_stmt = forever_stmt.body[0]
    cond = if_stmt.input("CONDITION")
    assert cond.block_id == "equals"
    assert [o.kind for o in cond.operands] == ["StringLiteral", "NumberLiteral"]


def test_level_demo_conservation(level_demo, level_demo_json):
    ids = represented_block_ids(level_demo)
    assert len(ids) == len(set(ids))
    assert set(ids) == set(real_block_ids(level_demo_json))


@pytest.mark.parametrize("name,project", PROJECTS, ids=[n for n, _ in PROJECTS])
def test_conservation(name, project):
    ids = represented_block_ids(project.parse())
    assert len(ids) == len(set(ids))
    assert set(ids) == set(real_block_ids(project.to_json()))


def test_self_next_is_malformed():
    p = Project()
    p.sprite("Cat").script(flag(), move(id="m"))
    doc = p.to_json()
    doc["targets"][1]["blocks"]["m"]["next"] = "m"
    with pytest.raises(MalformedProject) as info:
        parse_project_data(doc)
    assert info.value.block_id == "m"


@pytest.mark.parametrize("doc", [{}, {"targets": 3}, {"targets": []}, {"targets": [{"isStage": True}] * 2}])
def test_structurally_broken(doc):
    with pytest.raises(MalformedProject):
        parse_project_data(doc)


def test_invalid_json():
    with pytest.raises(MalformedProject):
        parse_project("{not json")


def test_sb3_round_trip_and_missing_asset():
    p = Project()
    p.sprite("Cat", costumes=["costume1", "ghost"]).script(flag(), move())
    program, assets = p.load_sb3()
    assert program.sprites[0].costume_names == ("costume1", "ghost")
    assert assets.missing == ()
    program, assets = p.load_sb3(skip_assets=("ghost",))
    assert not assets.has_costume("Cat", "ghost")
    assert assets.has_costume("Cat", "costume1")


def test_sb3_errors():
    with pytest.raises(NotAnArchive):
        load_sb3(b"not a zip")
    import io
    import zipfile

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as z:
        z.writestr("other.json", "{}")
    with pytest.raises(NoProjectJson):
        load_sb3(buf.getvalue())


class Recorder(Visitor):
    def __init__(self):
        super().__init__()
        self.seen = []

    def visit_statement(self, stmt):
        self.seen.append(("s", stmt.block_id))

    def visit_expression(self, expr):
        self.seen.append(("e", expr.kind, expr.block_id))


def test_traversal_is_deterministic():
    p = Project()
    cat = p.sprite("Cat")
    cat.script(flag(), forever(if_(touching(), say()), move()))
    cat.script(move())
    text = p.text()
    runs = []
    for _ in range(3):
        r = Recorder()
        traverse(parse_project(text), r)
        runs.append(r.seen)
    assert runs[0] == runs[1] == runs[2]
    assert runs[0]


def test_kind_dispatch(level_demo):
    class Kinds(Visitor):
        def __init__(self):
            super().__init__()
            self.forevers = 0

        def visit_Forever(self, stmt):
            self.forevers += 1

    v = Kinds()
    traverse(level_demo, v)
    assert v.forevers == 1


def test_unknown_opcode_survives():
    p = Project()
    p.sprite("Cat").script(flag(), block("weird_extension_block"))
    program = p.parse()
    stmt = program.sprites[0].scripts[0].body[0]
    assert stmt.kind == "UnknownOpcode"
    assert stmt.opcode == "weird_extension_block"


# -- mutation robustness -------------------------------------------------------

SEEDS = [project.to_json() for _, project in PROJECTS[:20]]
BLOCK_KEYS = ["opcode", "next", "parent", "inputs", "fields", "shadow", "topLevel", "mutation"]


@st.composite
def mutated(draw):
    doc = copy.deepcopy(draw(st.sampled_from(SEEDS)))
    targets = doc["targets"]
    for _ in range(draw(st.integers(1, 4))):
        target = draw(st.sampled_from(targets))
        if not target.get("blocks"):
            target.pop(draw(st.sampled_from(sorted(target))), None)
            continue
        bid = draw(st.sampled_from(sorted(target["blocks"])))
        block = target["blocks"][bid]
        action = draw(st.sampled_from(["drop_key", "garble", "drop_block", "dangle"]))
        if action == "drop_key":
            block.pop(draw(st.sampled_from(BLOCK_KEYS)), None)
        elif action == "garble":
            block[draw(st.sampled_from(BLOCK_KEYS))] = draw(
                st.one_of(st.none(), st.integers(), st.text(max_size=3), st.just([1, [4]]), st.just({"X": [9]}))
            )
        elif action == "drop_block":
            del target["blocks"][bid]
        else:
            block["next"] = "nowhere"
    return doc


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(mutated())
def test_mutations_parse_or_fail_cleanly(doc):
    try:
        program = parse_project(json.dumps(doc))
    except MalformedProject:
        return
    ids = represented_block_ids(program)
    assert len(ids) == len(set(ids))
