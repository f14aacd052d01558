"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--length 200000] [--strands 40] [--repeat 5]

Each kernel runs on the same random input under both backends; outputs are
compared before any timing is reported. The last block times an end-to-end
workload (profiles and key-lemma checks on random braids) with each backend
switched in process-wide.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from knotpos import _kernels
from knotpos.braid import BraidWord, braid_closure, key_lemma_identity
from knotpos.diagram import diagram_profile
from knotpos.linking import all_partitions


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_cases(rng: np.random.Generator, n: int, length: int):
    letters = rng.integers(1, n, size=length) * rng.choice([-1, 1], size=length)
    letters = letters.astype(np.int64)
    keep = rng.random(n) < 0.5
    m = 16
    ca = rng.integers(0, m, size=length).astype(np.int64)
    cb = rng.integers(0, m, size=length).astype(np.int64)
    signs = rng.choice([-1, 1], size=length).astype(np.int64)
    nv = length // 4
    eu = rng.integers(0, nv, size=length).astype(np.int64)
    ev = rng.integers(0, nv, size=length).astype(np.int64)
    succ = rng.permutation(length).astype(np.int64)
    return {
        "track": lambda k: k.track(n, letters),
        "restrict": lambda k: k.restrict(n, letters, keep),
        "pair_counts": lambda k: k.pair_counts(ca, cb, signs, m),
        "count_classes": lambda k: k.count_classes(nv, eu, ev),
        "cycle_labels": lambda k: k.cycle_labels(succ),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def workload(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, 41))
        letters = rng.integers(1, n, size=k) * rng.choice([-1, 1], size=k)
        b = BraidWord(n, tuple(int(j) for j in letters))
        diagram_profile(braid_closure(b))
        for P in all_partitions(b.num_components, min_blocks=2):
            key_lemma_identity(b, P)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=200_000)
    ap.add_argument("--strands", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--braids", type=int, default=300, help="braids in the end-to-end workload")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    nb, py = _kernels.get("numba"), _kernels.get("numpy")
    cases = kernel_cases(np.random.default_rng(args.seed), args.strands, args.length)
    print(f"kernels on {args.length} items, best of {args.repeat}")
    print(f"{'kernel':<14} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, run in cases.items():
        if not _same(run(nb), run(py)):  # also compiles the numba version
            raise SystemExit(f"{name}: backends disagree")
        t_py = best_of(lambda: run(py), args.repeat)
        t_nb = best_of(lambda: run(nb), args.repeat)
        print(f"{name:<14} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>7.1f}x")

    print(f"\nend to end: {args.braids} random braids (profile + key lemma)")
    for backend in ("numpy", "numba"):
        _kernels.set_backend(backend)
        _kernels.warm_up()
        t = best_of(lambda: workload(np.random.default_rng(args.seed), args.braids), 3)
        print(f"{backend:<6} {t:.3f} s")
    _kernels.set_backend(None)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
