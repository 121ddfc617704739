"""Finders and kernels checked against deliberately naive re-implementations.

The oracles compare scripts by their rendered scratchblocks text, which is an
independent route to "same code" from the finders' structural keys.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builder import Project, clicked, flag, if_, move, repeat, say, touching, wait
from scratchlint import _pykernels, kernels
from scratchlint.finders.base import Context, FinderConfig, run_finder
from scratchlint.reporting.scratchblocks import _lines, expression, render_unit

# -- random programs -----------------------------------------------------------

simple = st.sampled_from(
    [lambda: move(10), lambda: move(20), lambda: say("a"), lambda: say("b"), lambda: wait(1)]
)


def stmt_strategy(depth):
    if depth == 0:
        return simple
    inner = st.lists(stmt_strategy(depth - 1), min_size=1, max_size=4)
    cond = st.sampled_from(["_edge_", "_mouse_"])
    wrapped = st.one_of(
        st.builds(lambda c, body: lambda: if_(touching(c), *[b() for b in body]), cond, inner),
        st.builds(lambda body: lambda: repeat(2, *[b() for b in body]), inner),
    )
    return st.one_of(simple, simple, wrapped)


script_strategy = st.tuples(
    st.sampled_from([flag, clicked]), st.lists(stmt_strategy(2), min_size=0, max_size=7)
)
program_strategy = st.lists(script_strategy, min_size=1, max_size=4)


def build(scripts):
    p = Project()
    cat = p.sprite("Cat")
    for hat, body in scripts:
        cat.script(hat(), *[make() for make in body])
    return p.parse()


def found(fid, program):
    context = Context(program, None, FinderConfig())
    return sorted(tuple(sorted(i.block_ids)) for i in run_finder(fid, context))


def statement_lists(stmts):
    yield stmts
    for s in stmts:
        for stack in s.substacks:
            yield from statement_lists(stack)


def rendered(stmt):
    out = []
    _lines([stmt], frozenset(), out)
    return "\n".join(out)


def oracle_duplicated(program):
    scripts = program.sprites[0].scripts
    pairs = []
    for i, a in enumerate(scripts):
        for b in scripts[i + 1 :]:
            if render_unit(a) == render_unit(b):
                pairs.append(tuple(sorted((a.top_block_id, b.top_block_id))))
    return sorted(pairs)


def oracle_double_if(program):
    pairs = []
    for script in program.sprites[0].scripts:
        for stmts in statement_lists(script.body):
            for a, b in zip(stmts, stmts[1:]):
                if a.kind == b.kind == "IfThen":
                    if expression(a.input("CONDITION")) == expression(b.input("CONDITION")):
                        pairs.append(tuple(sorted((a.block_id, b.block_id))))
    return sorted(pairs)


def oracle_sequential(program, minimum=3):
    groups = []
    for script in program.sprites[0].scripts:
        for stmts in statement_lists(script.body):
            n = 0
            while n < len(stmts):
                m = n
                while m + 1 < len(stmts) and rendered(stmts[m + 1]) == rendered(stmts[n]):
                    m += 1
                if m - n + 1 >= minimum:
                    groups.append(tuple(sorted(s.block_id for s in stmts[n : m + 1])))
                n = m + 1
    return sorted(groups)


@settings(max_examples=150, deadline=None)
@given(program_strategy)
def test_duplicated_script_oracle(scripts):
    program = build(scripts)
    assert found("duplicated_script", program) == oracle_duplicated(program)


@settings(max_examples=150, deadline=None)
@given(program_strategy)
def test_double_if_oracle(scripts):
    program = build(scripts)
    assert found("double_if", program) == oracle_double_if(program)


@settings(max_examples=150, deadline=None)
@given(program_strategy)
def test_sequential_actions_oracle(scripts):
    program = build(scripts)
    assert found("sequential_actions", program) == oracle_sequential(program)


# -- kernels -------------------------------------------------------------------


def naive_runs(a, b, weight, same, min_weight):
    runs = []
    for i in range(len(a)):
        for j in range(len(b)):
            if same and j <= i:
                continue
            if a[i] != b[j]:
                continue
            if i > 0 and j > 0 and a[i - 1] == b[j - 1] and not (same and _chunk_start(a, b, i, j)):
                continue
            length = 0
            limit = (j - i) if same else None
            while i + length < len(a) and j + length < len(b) and a[i + length] == b[j + length]:
                if limit is not None and length == limit:
                    break
                length += 1
            if sum(weight[i : i + length]) >= min_weight:
                runs.append((i, j, length))
    return sorted(runs)


def _chunk_start(a, b, i, j):
    """On a self-diagonal, a run of equal tokens is cut every ``j - i`` steps."""
    d = j - i
    start = i
    while start > 0 and start + d - 1 < len(b) and a[start - 1] == b[start - 1 + d]:
        start -= 1
    return (i - start) % d == 0


tokens = st.lists(st.integers(0, 2), min_size=0, max_size=14)


@settings(max_examples=300, deadline=None)
@given(tokens, tokens, st.integers(1, 4))
def test_diagonal_runs_against_naive(a, b, min_weight):
    weight = [1 + (t % 2) for t in a]
    got = sorted(_pykernels.diagonal_runs(a, b, weight, False, min_weight))
    assert got == naive_runs(a, b, weight, False, min_weight)


@settings(max_examples=300, deadline=None)
@given(tokens, st.integers(1, 4))
def test_diagonal_runs_self_against_naive(a, min_weight):
    weight = [1] * len(a)
    got = sorted(_pykernels.diagonal_runs(a, a, weight, True, min_weight))
    assert got == naive_runs(a, a, weight, True, min_weight)


compiled = pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")


@compiled
@settings(max_examples=300, deadline=None)
@given(tokens, tokens, st.booleans(), st.integers(1, 4))
def test_diagonal_runs_backends_agree(a, b, same, min_weight):
    if same:
        b = a
    ia, ib = kernels.int_array(a), kernels.int_array(b)
    weight = kernels.int_array([1 + (t % 3) for t in a])
    c = kernels.compiled_backend.diagonal_runs(ia, ib, weight, same, min_weight)
    p = _pykernels.diagonal_runs(ia, ib, weight, same, min_weight)
    assert sorted(map(tuple, c)) == sorted(map(tuple, p))


@compiled
def test_solve_must_backends_agree():
    from array import array

    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 12)
        nbits = rng.randint(1, 130)
        words = max(1, (nbits + 63) // 64)
        edges = sorted({(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 3 * n))})
        preds = [[s for s, t in edges if t == v] for v in range(n)]
        succs = [[t for s, t in edges if s == v] for v in range(n)]

        def csr(lists):
            ptr, idx = [0], []
            for items in lists:
                idx.extend(items)
                ptr.append(len(idx))
            return kernels.index_array(ptr), kernels.index_array(idx)

        pp, pi = csr(preds)
        sp, si = csr(succs)
        is_source = array("B", [1 if v == 0 or rng.random() < 0.2 else 0 for v in range(n)])
        gen = array("Q", [rng.getrandbits(64) & ((1 << min(64, nbits - 64 * (k % words))) - 1) for k in range(n * words)])
        order = list(range(n))
        rng.shuffle(order)
        order = kernels.index_array(order)
        args = (n, words, nbits, pp, pi, sp, si, is_source, gen, order)
        assert list(kernels.compiled_backend.solve_must(*args)) == list(_pykernels.solve_must(*args))
