"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py

Both backends must give the same answers; timings are best of three.
"""

from __future__ import annotations

import random
import time

from momentlag import _kernels_py, kernels
from momentlag import corpus
from momentlag.face_ring import SimplicialComplex, wedge_complex
from momentlag.polytope import enumerate_vertices
from momentlag.real_complex import _boundary_rows, _cells

try:
    from momentlag import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def gf2_workload():
    # the largest boundary matrix of the real complex of a wedged pentagon
    K = wedge_complex(SimplicialComplex.polygon(5), [2, 2, 2, 2, 2])
    by_dim = _cells(K, None)
    d = max(range(1, max(by_dim) + 1), key=lambda k: len(by_dim[k]) * len(by_dim[k - 1]))
    index = {c: k for k, c in enumerate(by_dim[d - 1])}
    return _boundary_rows(by_dim[d], index)


def random_gf2(rows=3000, width=3000, seed=1):
    rng = random.Random(seed)
    return [rng.getrandbits(width) for _ in range(rows)]


def unimodular_workload():
    P = corpus.truncated_cube()
    V = enumerate_vertices(P)
    masks = list(V.active_masks) * 200
    return [list(r) for r in P.A], masks


def main():
    impls = [("python", _kernels_py)]
    if _ckernels is not None:
        impls.append(("cython", _ckernels))
    print(f"default backend: {kernels.BACKEND}")
    loads = {
        "gf2_rank (real complex boundary)": ("gf2", gf2_workload()),
        "gf2_rank (random 3000x3000)": ("gf2", random_gf2()),
    }
    A, masks = unimodular_workload()
    primes = kernels.primes_for_bound(kernels.hadamard_bound(A) + 1)
    for label, (kind, rows) in loads.items():
        results = {}
        for name, impl in impls:
            t, r = best_of(lambda: impl.gf2_rank(list(rows)))
            results[name] = r
            print(f"{label:36s} {name:7s} {t * 1000:9.2f} ms  rank={r}")
        assert len(set(results.values())) == 1
    results = {}
    for name, impl in impls:
        t, r = best_of(lambda: impl.unimodular_mod_primes(A, masks, primes))
        results[name] = r
        print(f"{'unimodular (truncated cube x200)':36s} {name:7s} {t * 1000:9.2f} ms  first_bad={r}")
    assert len(set(results.values())) == 1


if __name__ == "__main__":
    main()
