"""Compare the compiled kernel against the pure-Python fallback.

Runs the three hot primitives (integer column reduction, F_p matrix product,
spin-up) on representative desk-scale workloads, plus one end-to-end slice
(a prering law audit), and prints a table.  Usage:

    python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import random
import time

from endokat._kernel import _pure

try:
    from endokat._kernel import _core
except ImportError:
    _core = None


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_hnf(mod):
    rnd = random.Random(3)
    mods = [2, 4, 8, 2, 4, 8]
    work = [
        [[rnd.randint(0, 15) for _ in range(12)] for _ in range(8)]
        for _ in range(200)
    ]

    def run():
        for cols in work:
            mod.hnf_kernel(mods, [list(c) for c in cols], 6, 8)

    return run


def bench_matmul(mod):
    rnd = random.Random(5)
    a = tuple(tuple(rnd.randrange(3) for _ in range(8)) for _ in range(8))
    b = tuple(tuple(rnd.randrange(3) for _ in range(8)) for _ in range(8))

    def run():
        for _ in range(5000):
            mod.mat_mul(3, a, b)

    return run


def bench_spin(mod):
    rnd = random.Random(7)
    gens = [
        tuple(tuple(rnd.randrange(2) for _ in range(10)) for _ in range(10))
        for _ in range(3)
    ]

    def run():
        for v in range(1, 200):
            seed = tuple((v >> i) & 1 for i in range(10))
            mod.spin(2, gens, [seed], 10)

    return run


def bench_audit():
    # end-to-end slice through the whole stack with whichever backend is live
    from endokat import audits

    descs = audits.make_descriptors("prering", 20, 11)

    def run():
        rep = audits.run_suite("prering", descs, workers=1)
        assert not rep["violations"]

    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from endokat import backend_name

    rows = []
    for name, maker in (
        ("hnf_kernel x200", bench_hnf),
        ("mat_mul x5000", bench_matmul),
        ("spin x199", bench_spin),
    ):
        tp = timed(maker(_pure), args.repeat)
        if _core is not None:
            tc = timed(maker(_core), args.repeat)
            rows.append((name, tp, tc, tp / tc))
        else:
            rows.append((name, tp, None, None))
    ta = timed(bench_audit(), args.repeat)

    print(f"active backend: {backend_name()}")
    print(f"{'workload':<18} {'pure':>9} {'compiled':>9} {'speedup':>8}")
    for name, tp, tc, sp in rows:
        if tc is None:
            print(f"{name:<18} {tp:>8.3f}s {'n/a':>9} {'n/a':>8}")
        else:
            print(f"{name:<18} {tp:>8.3f}s {tc:>8.3f}s {sp:>7.1f}x")
    print(f"{'prering audit x20':<18} {ta:>8.3f}s  (active backend)")


if __name__ == "__main__":
    main()
