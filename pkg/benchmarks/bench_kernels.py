"""Numba kernels against the pure-numpy fallback on the same A5, p = 3 workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--lambda 02001 ...]

Each backend gets a fresh engine and a small warm-up weight first, so the
numba timings exclude JIT compilation. Both backends must produce the same
characters; the script exits 1 if they do not.
"""

import argparse
import statistics
import sys
import time

from charp.cli import weight_label
from charp.irreducibles import CharacterEngine
from charp.roots import GroupConfig, parse_weight

DEFAULT_WEIGHTS = ["00200", "02001", "10102", "01110"]


def run(backend: str, weights, repeat: int):
    config = GroupConfig(5, 3)
    CharacterEngine(config, backend=backend).restricted_ch((1, 0, 0, 0, 1))
    times, rows = {}, {}
    for lam in weights:
        samples = []
        for _ in range(repeat):
            eng = CharacterEngine(config, backend=backend)
            t0 = time.perf_counter()
            rows[lam] = eng.restricted_ch(lam)
            samples.append(time.perf_counter() - t0)
        times[lam] = statistics.median(samples)
    return times, rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--lambda", dest="lam", nargs="*", default=DEFAULT_WEIGHTS)
    args = ap.parse_args(argv)
    config = GroupConfig(5, 3)
    weights = [parse_weight(w, config.rank) for w in args.lam]
    numba_t, numba_rows = run("numba", weights, args.repeat)
    numpy_t, numpy_rows = run("numpy", weights, args.repeat)
    print(f"{'lambda':8s} {'weights':>7s} {'numba s':>9s} {'numpy s':>9s} {'speedup':>8s}  same")
    ok = True
    for lam in weights:
        same = numba_rows[lam] == numpy_rows[lam]
        ok &= same
        print(f"{weight_label(lam, config):8s} {len(numba_rows[lam]):7d} {numba_t[lam]:9.3f} "
              f"{numpy_t[lam]:9.3f} {numpy_t[lam] / numba_t[lam]:8.2f}  {same}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
