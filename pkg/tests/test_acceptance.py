"""One check per acceptance criterion; each prints a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or under pytest, where the
lines also appear in the terminal summary.  The corpus criterion needs a folder
of at least 100 downloaded projects named by ``SCRATCHLINT_CORPUS_DIR`` and
fails when none is available.
"""

import copy
import csv
import io
import json
import os
import random
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import conftest  # noqa: E402
from builder import Project, answer, ask, flag, say  # noqa: E402
from finder_cases import CLEAN, POSITIVE, all_projects  # noqa: E402
from scratchlint.finders.base import Context, FinderConfig, finder_ids, run_all, run_finder  # noqa: E402
from scratchlint.flow.cfg import build_cfg  # noqa: E402
from scratchlint.flow.dataflow import definitely_defined  # noqa: E402
from scratchlint.metrics import compute_metrics  # noqa: E402
from scratchlint.project import (  # noqa: E402
    MalformedProject,
    Visitor,
    inventory_from_program,
    parse_project,
    represented_block_ids,
    traverse,
)
from scratchlint.reporting import annotate_project, render_unit  # noqa: E402

LEVEL_DEMO = Path(__file__).parent / "fixtures" / "comparing_literals.json"
LEVEL_DEMO_SCRIPT = "when green flag clicked\nforever\nif <[level] = (21)> then\nbroadcast (level 21 v)\nend\nend"


def report(name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


def finder_issues(fid, program):
    return run_finder(fid, Context(program, inventory_from_program(program), FinderConfig()))


def shape(issues):
    return sorted((i.actor, tuple(sorted(i.block_ids))) for i in issues)


# -- criteria ---------------------------------------------------------------------


def fixture_suite():
    start = time.perf_counter()
    problems = []
    ids = finder_ids()
    for fid in ids:
        if fid not in POSITIVE or fid not in CLEAN:
            problems.append(f"{fid}: no fixture")
            continue
        project, expected = POSITIVE[fid]()
        want = sorted((a, tuple(sorted(b))) for a, b in expected)
        if shape(finder_issues(fid, project.parse())) != want:
            problems.append(f"{fid}: positive mismatch")
        if finder_issues(fid, CLEAN[fid]().parse()):
            problems.append(f"{fid}: clean fixture fires")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 30
    detail = f"{len(ids)} finders, {elapsed:.2f}s" + (f"; {problems[:3]}" if problems else "")
    return report("fixture suite: every finder has a firing positive and a silent clean fixture", ok, detail)


def level_demo_reproduction():
    program = parse_project(LEVEL_DEMO.read_text(encoding="utf-8"), name="level_demo")
    issues = run_all(program, inventory_from_program(program))
    on_equals = {i.finder_id for i in issues if i.block_ids == ("equals",)}
    rendered = render_unit(program.sprites[0].scripts[0])
    ok = {"comparing_literals", "variable_as_literal"} <= on_equals and rendered == LEVEL_DEMO_SCRIPT
    return report("level demo: literal comparison found and rendered", ok, f"on equals: {sorted(on_equals)}")


def missing_ask_matrix():
    counts = {}
    for asks in (0, 1):
        p = Project()
        head = [ask()] * asks
        p.sprite("Cat").script(flag(), *head, say(answer()), say(answer()), say(answer()))
        counts[asks] = len(finder_issues("missing_ask", p.parse()))
    ok = counts == {0: 3, 1: 0}
    return report("missing ask: 3 answers/0 asks -> 3, 3 answers/1 ask -> 0", ok, str(counts))


def corpus_run():
    name = "corpus: >=100 projects, no crashes, one CSV column per finder, >=5 finders fire, <5 min"
    folder = os.environ.get("SCRATCHLINT_CORPUS_DIR")
    if not folder or not Path(folder).is_dir():
        return report(name, False, "no corpus available; set SCRATCHLINT_CORPUS_DIR")
    files = [p for p in Path(folder).iterdir() if p.suffix.lower() in (".sb3", ".json")]
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "corpus.csv"
        start = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "scratchlint", "--check", "--path", folder, "--output", str(out), "--jobs", "4"],
            capture_output=True,
            text=True,
        )
        elapsed = time.perf_counter() - start
        table = list(csv.reader(io.StringIO(out.read_text(encoding="utf-8"), newline=""))) if out.exists() else []
    header = table[0] if table else []
    finder_columns = [h for h in header if h in set(finder_ids())]
    fired = {h for n, h in enumerate(header) if h in finder_columns and any(r[n] != "0" for r in table[1:])}
    crashes = proc.stderr.count("error:")
    ok = (
        len(files) >= 100
        and crashes == 0
        and len(finder_columns) == len(finder_ids())
        and len(fired) >= 5
        and elapsed < 300
    )
    detail = f"{len(files)} projects, {crashes} errors, {len(finder_columns)} columns, {len(fired)} fired, {elapsed:.0f}s"
    return report(name, ok, detail)


class _Order(Visitor):
    def __init__(self):
        super().__init__()
        self.seen = []

    def visit_statement(self, stmt):
        self.seen.append(stmt.block_id)

    def visit_expression(self, expr):
        self.seen.append((expr.kind, expr.block_id))


def _traversal(text):
    v = _Order()
    traverse(parse_project(text), v)
    return v.seen


def _conserved(doc, program):
    real = {
        bid
        for t in doc.get("targets", [])
        if isinstance(t, dict) and isinstance(t.get("blocks"), dict)
        for bid, b in t["blocks"].items()
        if isinstance(b, list) or (isinstance(b, dict) and b.get("shadow") is not True)
    }
    ids = represented_block_ids(program)
    return len(ids) == len(set(ids)) and set(ids) <= real


def parser_properties():
    failures = []
    seeds = [json.loads(LEVEL_DEMO.read_text(encoding="utf-8"))] + [p.to_json() for _, p in all_projects()]
    for doc in seeds:
        program = parse_project(json.dumps(doc))
        real = {bid for t in doc["targets"] for bid, b in t["blocks"].items() if not b.get("shadow")}
        if set(represented_block_ids(program)) != real or not _conserved(doc, program):
            failures.append("conservation")
        text = json.dumps(doc)
        if _traversal(text) != _traversal(text):
            failures.append("determinism")
    rng = random.Random(2024)
    keys = ["opcode", "next", "parent", "inputs", "fields", "shadow", "topLevel", "mutation"]
    mutations = 0
    while mutations < 200:
        doc = copy.deepcopy(rng.choice(seeds))
        blocks = [(t, bid) for t in doc["targets"] for bid in t["blocks"]]
        if not blocks:
            continue
        target, bid = rng.choice(blocks)
        target["blocks"][bid].pop(rng.choice(keys), None)
        mutations += 1
        text = json.dumps(doc)
        try:
            program = parse_project(text)
        except MalformedProject:
            continue
        except Exception as exc:  # noqa: BLE001
            failures.append(f"crash {type(exc).__name__}")
            continue
        if not _conserved(doc, program):
            failures.append("mutant conservation")
        if _traversal(text) != _traversal(text):
            failures.append("mutant determinism")
    ok = not failures
    return report(
        "parser: conservation and deterministic traversal on fixtures and 200 mutants",
        ok,
        f"{len(seeds)} fixtures, {mutations} mutants" + (f"; {failures[:3]}" if failures else ""),
    )


def dataflow_oracle():
    from test_flow import FIXTURES, oracle

    projects = list(FIXTURES.values()) + [p for _, p in all_projects()]
    checked, bad = 0, 0
    for project in projects:
        program = project.parse()
        if sum(len(list(a.statements())) for a in program.actors) > 12:
            continue
        cfg = build_cfg(program)
        fact = definitely_defined(cfg)
        expected = oracle(cfg)
        checked += 1
        for v in range(len(cfg)):
            if fact.defined_at(v) != expected.get(v):
                bad += 1
                break
    return report("dataflow: solver equals brute-force path enumeration", bad == 0 and checked > 0, f"{checked} fixtures")


def level_demo_metrics():
    m = compute_metrics(parse_project(LEVEL_DEMO.read_text(encoding="utf-8"))).as_dict()
    got = (m["blockCount"], m["scriptCount"], m["weightedMeanComplexity"])
    return report("metrics: level demo has 5 blocks, 1 script, complexity 2.0", got == (5, 1, 2.0), str(got))


def report_round_trip():
    failures = []
    texts = [LEVEL_DEMO.read_text(encoding="utf-8")] + [p.text() for _, p in all_projects()]
    for text in texts:
        program = parse_project(text)
        issues = run_all(program, inventory_from_program(program))
        again = parse_project(annotate_project(text, issues))
        if run_all(again, inventory_from_program(again)) != issues:
            failures.append(program.name)
    with tempfile.TemporaryDirectory() as tmp:
        folder = Path(tmp) / "in"
        folder.mkdir()
        (folder / "level_demo.json").write_text(texts[0], encoding="utf-8")
        for n, text in enumerate(texts[1:20]):
            (folder / f"p{n:02}.json").write_text(text, encoding="utf-8")
        outputs = {}
        for run in range(2):
            for ext in ("json", "csv"):
                target = Path(tmp) / f"r{run}.{ext}"
                subprocess.run(
                    [sys.executable, "-m", "scratchlint", "--check", "--path", str(folder), "--output", str(target)],
                    capture_output=True,
                    check=False,
                )
                outputs.setdefault(ext, []).append(target.read_bytes() if target.exists() else None)
    stable = all(v[0] is not None and v[0] == v[1] for v in outputs.values())
    ok = not failures and stable
    return report(
        "round trip: annotated projects re-analyze identically; JSON and CSV byte-stable",
        ok,
        f"{len(texts)} projects, stable={stable}" + (f"; {failures[:3]}" if failures else ""),
    )


CRITERIA = [
    fixture_suite,
    level_demo_reproduction,
    missing_ask_matrix,
    corpus_run,
    parser_properties,
    dataflow_oracle,
    level_demo_metrics,
    report_round_trip,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
