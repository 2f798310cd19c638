"""Compiled vs pure-Python fundamental-tensor kernels.

    python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 5]

Times batched fundamental matrices (the minkowski_check hot loop) and
single g_Y(U, V) evaluations on each available backend, and checks that
the backends agree.
"""

import argparse
import sys
import timeit

import numpy as np

from lieflag import _kernels


def workload(n, seed):
    rng = np.random.default_rng(seed)
    G = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 2.0]])
    X = 0.2 * np.array([-2.0, 1.0, 0.0])
    Ys = rng.normal(size=(n, 3))
    UV = rng.normal(size=(2, 3))
    return G, X, Ys, UV


def best(stmt, repeat):
    return min(timeit.repeat(stmt, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000, help="directions per batch")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    G, X, Ys, (U, V) = workload(args.n, args.seed)
    if "compiled" not in _kernels.BACKENDS:
        print("compiled extension not built; only the python backend is available", file=sys.stderr)

    rows = {}
    for name in sorted(_kernels.BACKENDS):
        for kind, label in ((0, "randers"), (1, "matsumoto")):
            batch = best(lambda: _kernels.fundamental_matrices(kind, G, X, Ys, backend=name), args.repeat)
            single = best(lambda: [_kernels.fundamental_form(kind, G, X, y, U, V, backend=name) for y in Ys[:200]],
                          args.repeat) / 200
            rows[name, label] = (batch, single)

    print(f"{'backend':10s} {'kind':10s} {'batch[n=%d] ms' % args.n:>18s} {'per g_Y(U,V) us':>16s}")
    for (name, label), (batch, single) in sorted(rows.items()):
        print(f"{name:10s} {label:10s} {1e3 * batch:18.3f} {1e6 * single:16.2f}")

    if "compiled" in _kernels.BACKENDS:
        for label in ("randers", "matsumoto"):
            py, c = rows["python", label], rows["compiled", label]
            print(f"speedup {label:10s} batch x{py[0] / c[0]:.1f}, single x{py[1] / c[1]:.1f}")
        for kind in (0, 1):
            a = _kernels.fundamental_matrices(kind, G, X, Ys, backend="python")
            b = _kernels.fundamental_matrices(kind, G, X, Ys, backend="compiled")
            print(f"max |python - compiled| kind {kind}: {np.max(np.abs(a - b)):.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
