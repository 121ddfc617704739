"""Pure-Python implementations of the analysis kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``SCRATCHLINT_PURE_PYTHON`` is set.
"""

from __future__ import annotations

from array import array
from collections import deque


def solve_must(n, words, nbits, pred_ptr, pred_idx, succ_ptr, succ_idx, is_source, gen, order):
    """Greatest fixpoint of a forward must-analysis with intersection meet.

    ``gen`` holds ``n * words`` 64-bit words.  Sources start from the empty
    set; every other node starts from the full universe of ``nbits`` bits.
    Returns the per-node entry sets as a flat ``array('Q')``.
    """
    top = (1 << nbits) - 1
    gens = [_unpack(gen, i, words) for i in range(n)]
    ins = [0 if is_source[i] else top for i in range(n)]
    outs = [ins[i] | gens[i] for i in range(n)]
    queue = deque(order)
    queued = [False] * n
    for i in order:
        queued[i] = True
    while queue:
        node = queue.popleft()
        queued[node] = False
        if is_source[node]:
            new_in = 0
        else:
            new_in = top
            for k in range(pred_ptr[node], pred_ptr[node + 1]):
                new_in &= outs[pred_idx[k]]
        ins[node] = new_in
        new_out = new_in | gens[node]
        if new_out != outs[node]:
            outs[node] = new_out
            for k in range(succ_ptr[node], succ_ptr[node + 1]):
                succ = succ_idx[k]
                if not queued[succ]:
                    queued[succ] = True
                    queue.append(succ)
    result = array("Q")
    mask = (1 << 64) - 1
    for value in ins:
        for w in range(words):
            result.append((value >> (64 * w)) & mask)
    return result


def _unpack(flat, node, words):
    value = 0
    base = node * words
    for w in range(words):
        value |= flat[base + w] << (64 * w)
    return value


def diagonal_runs(a, b, weight, same, min_weight):
    """Maximal runs of equal tokens on every diagonal of ``a`` against ``b``.

    ``weight[i]`` counts how much token ``a[i]`` contributes to a run's size;
    runs lighter than ``min_weight`` are dropped.  With ``same`` set, ``a`` and
    ``b`` are the same sequence: only diagonals above the main one are swept
    and a run never overlaps its own copy.
    """
    na, nb = len(a), len(b)
    runs = []
    first = 1 if same else -(na - 1)
    for d in range(first, nb):
        i = max(0, -d)
        j = i + d
        length = 0
        w = 0
        while i < na and j < nb:
            if a[i] == b[j] and (not same or length < d):
                length += 1
                w += weight[i]
            else:
                if length and w >= min_weight:
                    runs.append((i - length, j - length, length))
                if a[i] == b[j]:
                    # same-sequence run hit its own copy; restart here
                    length, w = 1, weight[i]
                else:
                    length, w = 0, 0
            i += 1
            j += 1
        if length and w >= min_weight:
            runs.append((i - length, j - length, length))
    return runs
