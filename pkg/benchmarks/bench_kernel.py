"""Compare the compiled kernel with the pure Python one.

Runs the brute-force loops of the oracle on the same seeded random programs
with both implementations, checks that they agree, and prints timings.

    python benchmarks/bench_kernel.py [--programs N] [--atoms K] [--seed S]
"""

import argparse
import random
import sys
import time

from rasq import _kernel_py
from rasq.harness import GenConfig, gen_program
from rasq.oracle import _Compiled

try:
    from rasq import _kernel
except ImportError:
    _kernel = None


def workload(n, atoms, seed):
    cfg = GenConfig(max_atoms=atoms, max_rules=2 * atoms, max_body=3, negation_probability=0.5)
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        c = _Compiled(gen_program(cfg, rng))
        out.append((c.args(), c.n, c.head_mask))
    return out


def run(kernel, progs):
    results = []
    t = {}
    start = time.perf_counter()
    for args, n, heads in progs:
        results.append(kernel.answer_set_masks(*args, heads))
    t["answer_set_masks"] = time.perf_counter() - start
    start = time.perf_counter()
    for args, n, heads in progs:
        results.append(kernel.cs_subsets(*args, heads))
    t["cs_subsets"] = time.perf_counter() - start
    start = time.perf_counter()
    for args, n, heads in progs:
        results.append(kernel.gamma_images(*args, n, heads))
    t["gamma_images"] = time.perf_counter() - start
    return results, t


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--programs", type=int, default=300)
    ap.add_argument("--atoms", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernel is None:
        print("compiled kernel not built; only the Python kernel is available")
        return 1
    progs = workload(args.programs, args.atoms, args.seed)
    res_py, t_py = run(_kernel_py, progs)
    res_c, t_c = run(_kernel, progs)
    if res_py != res_c:
        print("MISMATCH between compiled and Python kernels")
        return 1
    print(f"{args.programs} programs, up to {args.atoms} atoms, seed {args.seed}")
    print(f"{'function':<18} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for k in t_py:
        speed = t_py[k] / t_c[k] if t_c[k] > 0 else float("inf")
        print(f"{k:<18} {t_py[k]:>10.3f} {t_c[k]:>11.3f} {speed:>7.1f}x")
    total_py, total_c = sum(t_py.values()), sum(t_c.values())
    print(f"{'total':<18} {total_py:>10.3f} {total_c:>11.3f} {total_py / total_c:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
