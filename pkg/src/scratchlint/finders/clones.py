"""Code clone detection (types 1 to 3) over normalized statement token streams.

Every script and procedure is flattened pre-order into tokens: one per
statement, plus zero-weight markers closing each sub-stack.  Two token kinds
are kept per statement: an exact one (type 1) and one with literal values and
identifiers erased (type 2).  Matching runs are found by sweeping every
diagonal of the token comparison matrix (the compiled kernel); type 3 clones
are chains of such runs separated by small gaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import accumulate

from .. import kernels
from ..project.nodes import Expression, Statement
from . import util
from .base import Category, Finder, register

MIN_CLONE_LENGTH = 6
MAX_GAP = 2

_LITERALS = frozenset({"NumberLiteral", "StringLiteral", "BoolLiteral", "ColorLiteral", "BroadcastRef"})
_IDENTIFIERS = frozenset({"VariableRef", "ListRef", "ParameterRef"})


def shape(expr: Expression) -> tuple:
    """Expression with literal values and identifiers erased."""
    if expr.kind in _LITERALS:
        return ("LIT",)
    if expr.kind in _IDENTIFIERS:
        return ("ID", expr.kind)
    return (expr.kind, expr.opcode, expr.op, expr.operand_names, tuple(shape(e) for e in expr.operands))


def exact_token(stmt: Statement) -> tuple:
    return (
        stmt.opcode,
        stmt.proccode,
        stmt.input_names,
        tuple(util.norm_expr(e) for e in stmt.inputs),
        tuple((k, v) for k, v, _ in stmt.fields),
    )


def renamed_token(stmt: Statement) -> tuple:
    return (
        stmt.opcode,
        "call" if stmt.proccode is not None else None,
        stmt.input_names,
        tuple(shape(e) for e in stmt.inputs),
        tuple(k for k, _, _ in stmt.fields),
    )


@dataclass
class TokenStream:
    actor: object
    unit: object
    exact: list = field(default_factory=list)
    renamed: list = field(default_factory=list)
    weights: list = field(default_factory=list)
    block_ids: list = field(default_factory=list)

    def add(self, stmt: Statement) -> None:
        self.exact.append(exact_token(stmt))
        self.renamed.append(renamed_token(stmt))
        self.weights.append(1)
        self.block_ids.append(stmt.block_id)
        for n, stack in enumerate(stmt.substacks):
            for inner in stack:
                self.add(inner)
            marker = ("END", stmt.opcode, n)
            self.exact.append(marker)
            self.renamed.append(marker)
            self.weights.append(0)
            self.block_ids.append(None)

    @property
    def size(self) -> int:
        return sum(self.weights)


@dataclass(frozen=True)
class Clone:
    first: TokenStream
    second: TokenStream
    a: tuple[int, int]
    b: tuple[int, int]
    type: int
    length: int


class _Interner(dict):
    def __missing__(self, key):
        value = self[key] = len(self)
        return value


def streams_of(program) -> list[TokenStream]:
    streams = []
    for actor in program.actors:
        for unit in actor.units():
            stream = TokenStream(actor, unit)
            for stmt in unit.body:
                stream.add(stmt)
            streams.append(stream)
    return streams


def find_clones(program, min_length: int = MIN_CLONE_LENGTH, max_gap: int = MAX_GAP, impl=None) -> list[Clone]:
    streams = [s for s in streams_of(program) if s.size >= min_length]
    interner = _Interner()
    encoded = [
        (kernels.int_array(interner[t] for t in s.renamed), kernels.int_array(s.weights)) for s in streams
    ]
    prefix = [list(accumulate(s.weights, initial=0)) for s in streams]
    clones = []
    for x in range(len(streams)):
        for y in range(x, len(streams)):
            same = x == y
            a, wa = encoded[x]
            b, _ = encoded[y]
            found = kernels.diagonal_runs(a, b, wa, same, 1, impl=impl)
            if not found:
                continue
            clones.extend(_chain(streams[x], streams[y], prefix[x], prefix[y], found, same, min_length, max_gap))
    return clones


def _chain(sa, sb, pa, pb, found, same, min_length, max_gap) -> list[Clone]:
    found = sorted(found)
    consumed = set()
    result = []
    for start, run in enumerate(found):
        if start in consumed:
            continue
        chain = [run]
        current = start
        while True:
            i, j, n = found[current]
            best = None
            for k in range(current + 1, len(found)):
                if k in consumed:
                    continue
                i2, j2, _ = found[k]
                if i2 < i + n:
                    continue
                gap_a = pa[i2] - pa[i + n]
                if gap_a > max_gap:
                    break  # runs are sorted by start, gaps only grow from here
                if j2 < j + n:
                    continue
                gap_b = pb[j2] - pb[j + n]
                if gap_b > max_gap:
                    continue
                score = (gap_a + gap_b, i2, j2)
                if best is None or score < best[0]:
                    best = (score, k)
            if best is None:
                break
            current = best[1]
            consumed.add(current)
            chain.append(found[current])
        i0, j0, _ = chain[0]
        il, jl, nl = chain[-1]
        a_range, b_range = (i0, il + nl), (j0, jl + nl)
        if same and a_range[1] > b_range[0]:
            continue
        length = sum(pa[i + n] - pa[i] for i, _, n in chain)
        if length < min_length:
            continue
        if len(chain) > 1:
            kind = 3
        else:
            exact_equal = sa.exact[a_range[0] : a_range[1]] == sb.exact[b_range[0] : b_range[1]]
            kind = 1 if exact_equal else 2
        result.append(Clone(sa, sb, a_range, b_range, kind, length))
    return result


@register
class ClonedCode(Finder):
    id = "cloned_code"
    category = Category.CODE_SMELL
    summary = "Code clones of types 1 to 3"

    def check(self):
        for clone in find_clones(self.context.program):
            self._emit(clone.first, clone.a, clone.second, clone.b, clone)
            self._emit(clone.second, clone.b, clone.first, clone.a, clone)
        return self.issues

    def _emit(self, stream, span, other, other_span, clone):
        blocks = [b for b in stream.block_ids[span[0] : span[1]] if b is not None]
        other_blocks = [b for b in other.block_ids[other_span[0] : other_span[1]] if b is not None]
        self.report(
            blocks,
            actor=stream.actor,
            top=stream.unit.top_block_id,
            type=clone.type,
            length=clone.length,
            other=f"{other.actor.name}/{other_blocks[0] if other_blocks else ''}",
        )
