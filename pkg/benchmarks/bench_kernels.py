"""Compare the compiled GF(2) kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from funcomp import _pykernels

try:
    from funcomp import _ckernels
except ImportError:
    _ckernels = None


def workloads(rng):
    rows = [[rng.getrandbits(24) for _ in range(16)] for _ in range(200)]
    masks = [rng.getrandbits(12) for _ in range(9)]
    return rows, masks


def bench(mod, rows, masks, repeat):
    def rref():
        for r in rows:
            mod.gf2_rref(r)

    def reduce():
        for r in rows:
            b, p = mod.gf2_rref(r[:8])
            for v in r:
                mod.gf2_reduce(v, b, p)

    def profile():
        mod.gf2_parity_profile(masks, 12)

    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in
            (("rref", rref), ("reduce", reduce), ("parity_profile", profile))}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows, masks = workloads(random.Random(0))
    py = bench(_pykernels, rows, masks, args.repeat)
    if _ckernels is None:
        print("compiled kernels not built; python timings only")
    cy = bench(_ckernels, rows, masks, args.repeat) if _ckernels else {}
    # both backends must agree before timings mean anything
    if _ckernels:
        for r in rows:
            assert [list(x) for x in _ckernels.gf2_rref(r)] == [list(x) for x in _pykernels.gf2_rref(r)]
        assert list(_ckernels.gf2_parity_profile(masks, 12)) == _pykernels.gf2_parity_profile(masks, 12)
    print(f"{'kernel':<16}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, t in py.items():
        c = cy.get(name)
        print(f"{name:<16}{t:>12.5f}" + (f"{c:>12.5f}{t / c:>9.1f}x" if c else f"{'-':>12}{'-':>10}"))


if __name__ == "__main__":
    main()
