"""Compare the compiled and numpy kernel backends on d = 3 workloads.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time per kernel and backend, the speedup, and the
largest disagreement between backends.
"""

import argparse
import timeit

import numpy as np

from thorp.analysis import shuffle_law
from thorp.analysis.distribution import _round_maps
from thorp.kernels import all_perms, backends


def workloads(rng):
    perms = all_perms(8)
    probs = rng.dirichlet(np.ones(perms.shape[0]))
    maps = _round_maps(3)
    x = shuffle_law(3, 3)
    xs = x.support()
    ms = rng.choice(perms.shape[0], size=256, replace=False)
    mw = rng.dirichlet(np.ones(256))
    nu = maps[5]
    return {
        "rank_rows 40320x8": lambda k: k.rank_rows(perms),
        "compose_rank 40320x8": lambda k: k.compose_rank(nu, perms),
        "step d=3": lambda k: k.step(probs, perms, maps),
        f"convolve {xs.size}x256": lambda k: k.convolve(perms[xs], x.probs[xs], perms[ms],
                                                       mw, perms.shape[0]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    found = backends()
    rng = np.random.default_rng(0)
    print(f"backends: {', '.join(found)}")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name in found)
          + f"{'speedup':>10}{'max diff':>12}")
    for label, fn in workloads(rng).items():
        best, outs = {}, {}
        for name, mod in found.items():
            outs[name] = fn(mod)
            best[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        row = f"{label:<24}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in found)
        if "cython" in found:
            diff = np.max(np.abs(np.asarray(outs["python"], dtype=float)
                                 - np.asarray(outs["cython"], dtype=float)))
            row += f"{best['python'] / best['cython']:>9.1f}x{diff:>12.1e}"
        print(row)


if __name__ == "__main__":
    main()
