# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled analysis kernels; see ``_pykernels`` for the reference semantics."""

from cpython.array cimport array, clone
from libc.stdlib cimport free, malloc


def solve_must(Py_ssize_t n, Py_ssize_t words, Py_ssize_t nbits,
               long long[:] pred_ptr, long long[:] pred_idx,
               long long[:] succ_ptr, long long[:] succ_idx,
               unsigned char[:] is_source, unsigned long long[:] gen,
               long long[:] order):
    if n == 0:
        return array("Q")
    cdef array template = array("Q")
    cdef array ins_arr = clone(template, n * words, zero=True)
    cdef array outs_arr = clone(template, n * words, zero=True)
    cdef unsigned long long[:] ins = ins_arr
    cdef unsigned long long[:] outs = outs_arr
    cdef unsigned long long *top = <unsigned long long *> malloc(max(words, 1) * sizeof(unsigned long long))
    cdef unsigned long long *cur = <unsigned long long *> malloc(max(words, 1) * sizeof(unsigned long long))
    cdef long long *queue = <long long *> malloc(max(n, 1) * sizeof(long long))
    cdef unsigned char *queued = <unsigned char *> malloc(max(n, 1))
    cdef Py_ssize_t i, w, k, node, succ, head = 0, count = 0, tail = 0
    cdef Py_ssize_t rem
    cdef bint changed
    if top == NULL or cur == NULL or queue == NULL or queued == NULL:
        free(top); free(cur); free(queue); free(queued)
        raise MemoryError()
    try:
        for w in range(words):
            rem = nbits - 64 * w
            if rem >= 64:
                top[w] = 0xFFFFFFFFFFFFFFFFULL
            elif rem <= 0:
                top[w] = 0
            else:
                top[w] = (1ULL << rem) - 1
        for i in range(n):
            queued[i] = 0
            for w in range(words):
                if is_source[i]:
                    ins[i * words + w] = 0
                else:
                    ins[i * words + w] = top[w]
                outs[i * words + w] = ins[i * words + w] | gen[i * words + w]
        for k in range(order.shape[0]):
            node = order[k]
            if not queued[node]:
                queued[node] = 1
                queue[tail] = node
                tail = (tail + 1) % n
                count += 1
        while count > 0:
            node = queue[head]
            head = (head + 1) % n
            count -= 1
            queued[node] = 0
            for w in range(words):
                if is_source[node]:
                    cur[w] = 0
                else:
                    cur[w] = top[w]
            if not is_source[node]:
                for k in range(pred_ptr[node], pred_ptr[node + 1]):
                    i = pred_idx[k]
                    for w in range(words):
                        cur[w] &= outs[i * words + w]
            changed = False
            for w in range(words):
                ins[node * words + w] = cur[w]
                cur[w] |= gen[node * words + w]
                if cur[w] != outs[node * words + w]:
                    changed = True
                    outs[node * words + w] = cur[w]
            if changed:
                for k in range(succ_ptr[node], succ_ptr[node + 1]):
                    succ = succ_idx[k]
                    if not queued[succ]:
                        queued[succ] = 1
                        queue[tail] = succ
                        tail = (tail + 1) % n
                        count += 1
    finally:
        free(top)
        free(cur)
        free(queue)
        free(queued)
    return ins_arr


def diagonal_runs(int[:] a, int[:] b, int[:] weight, bint same, int min_weight):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t d, i, j, length, first
    cdef long w
    runs = []
    first = 1 if same else -(na - 1)
    for d in range(first, nb):
        i = -d if d < 0 else 0
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
                    length = 1
                    w = weight[i]
                else:
                    length = 0
                    w = 0
            i += 1
            j += 1
        if length and w >= min_weight:
            runs.append((i - length, j - length, length))
    return runs
