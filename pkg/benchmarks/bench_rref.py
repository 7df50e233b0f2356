"""Compare the compiled and numpy row-reduction kernels.

Part one times both kernels on random matrices over Z/p and checks that they
produce the same reduced form.  Part two runs one end-to-end computation (the
Ext modules of an Eilenberg-MacLane sheaf on P^3) in fresh interpreters with
and without BGGTATE_DISABLE_NUMBA=1.

    python3 benchmarks/bench_rref.py [--sizes 50 100 200] [--prime 32003]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from bggtate._kernels import HAVE_NUMBA, rref_mod_p_numba, rref_mod_p_numpy

END_TO_END = """
import time
from bggtate.exactlin import make_field
from bggtate.homalg import ModulePresentation
from bggtate.rings import RingSpec
from bggtate import sheaf, tate
S = RingSpec(3, make_field(32003))
k = ModulePresentation.from_generators(S, [0], [{0: {tuple(int(i == j) for i in range(4)): 1}} for j in range(4)])
t = time.perf_counter()
M, _ = tate.em_sheaf(tate.EMSpec(k.direct_sum(k.twist(1)), 1))
sheaf.ext_presentations(M)
print(time.perf_counter() - t)
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_kernels(sizes, p, repeat):
    rng = np.random.default_rng(0)
    print(f"{'shape':>12} {'rank':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in sizes:
        # rank-deficient on purpose so the pivot search skips columns
        a = rng.integers(0, p, size=(n, n // 2)) @ rng.integers(0, p, size=(n // 2, 2 * n)) % p
        a = a.astype(np.int64)
        x, y = a.copy(), a.copy()
        rank_x, piv_x = rref_mod_p_numba(x, p, a.shape[1])
        rank_y, piv_y = rref_mod_p_numpy(y, p, a.shape[1])
        if rank_x != rank_y or not np.array_equal(piv_x, piv_y) or not np.array_equal(x, y):
            raise SystemExit(f"kernels disagree on a {a.shape} matrix")
        t_jit = best_of(lambda: rref_mod_p_numba(a.copy(), p, a.shape[1]), repeat)
        t_np = best_of(lambda: rref_mod_p_numpy(a.copy(), p, a.shape[1]), repeat)
        print(f"{str(a.shape):>12} {rank_x:>6} {t_jit:>10.4f} {t_np:>10.4f} {t_np / t_jit:>8.1f}")


def bench_end_to_end():
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, BGGTATE_DISABLE_NUMBA=flag)
        # first run warms the on-disk compilation cache
        subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, check=True)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        print(f"EM sheaf on P^3, Ext modules ({label}): {float(out.stdout):.2f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rref_mod_p_numba(np.eye(2, dtype=np.int64), args.prime, 2)  # compile
    bench_kernels(args.sizes, args.prime, args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
