"""Compare the compiled and pure-Python kernels on synthetic inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints the best time per kernel and backend, and the speedup.  Results of the
two backends are checked for equality before timing.
"""

import argparse
import random
import sys
import timeit
from array import array

from scratchlint import _pykernels, kernels


def dataflow_case(n=4000, nbits=300, seed=1):
    rng = random.Random(seed)
    words = (nbits + 63) // 64
    # a long chain with forward branches and some back edges, like a big script
    edges = set()
    for v in range(n - 1):
        edges.add((v, v + 1))
        if rng.random() < 0.2:
            edges.add((v, min(n - 1, v + rng.randint(2, 20))))
        if rng.random() < 0.05:
            edges.add((v, max(0, v - rng.randint(1, 50))))
    preds = [[] for _ in range(n)]
    succs = [[] for _ in range(n)]
    for s, t in sorted(edges):
        preds[t].append(s)
        succs[s].append(t)

    def csr(lists):
        ptr, idx = [0], []
        for items in lists:
            idx.extend(items)
            ptr.append(len(idx))
        return kernels.index_array(ptr), kernels.index_array(idx)

    pp, pi = csr(preds)
    sp, si = csr(succs)
    is_source = array("B", [1 if v == 0 or rng.random() < 0.01 else 0 for v in range(n)])
    gen = array("Q", [0] * (n * words))
    for v in range(n):
        if rng.random() < 0.1:
            bit = rng.randrange(nbits)
            gen[v * words + bit // 64] |= 1 << (bit % 64)
    order = kernels.index_array(range(n))
    return (n, words, nbits, pp, pi, sp, si, is_source, gen, order)


def clone_case(length=1500, alphabet=12, seed=2):
    rng = random.Random(seed)
    a = kernels.int_array(rng.randrange(alphabet) for _ in range(length))
    weight = kernels.int_array([1] * length)
    return (a, a, weight, True, 6)


def _normal(result):
    return sorted(tuple(r) if isinstance(r, (tuple, list)) else r for r in result)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled kernels unavailable (not built, or disabled by SCRATCHLINT_PURE_PYTHON); timing Python only")
    cases = {
        "solve_must": dataflow_case(),
        "diagonal_runs": clone_case(),
    }
    print(f"{'kernel':15} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, case in cases.items():
        py_fn = getattr(_pykernels, name)
        py_time = best(lambda: py_fn(*case), args.repeat)
        if compiled is None:
            print(f"{name:15} {py_time:10.4f} {'-':>10} {'-':>8}")
            continue
        c_fn = getattr(compiled, name)
        if _normal(c_fn(*case)) != _normal(py_fn(*case)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        c_time = best(lambda: c_fn(*case), args.repeat)
        print(f"{name:15} {py_time:10.4f} {c_time:10.4f} {py_time / c_time:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
