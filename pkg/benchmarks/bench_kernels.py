"""Compare the compiled and pure-Python coset-table kernels.

Run with ``python benchmarks/bench_kernels.py``.  Each case is timed on
both backends (best of ``--repeat`` runs) after checking that they agree.
"""
from __future__ import annotations

import argparse
import time

from tessella import _backend, _kernels_py
from tessella.groups import build_triangle_group
from tessella.words import to_indices

try:
    from tessella import _kernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None


def _cases():
    # the group itself: 120 cosets of the trivial subgroup of *235
    sph = build_triangle_group(2, 3, 5)
    rels5 = [to_indices(r) for r in sph.relators]
    yield "todd_coxeter *235 trivial", "todd_coxeter", (rels5, [], 10_000)
    # the order-336 quotient of *237 by a commutator power
    big = build_triangle_group(2, 3, 7)
    rels7 = [to_indices(r) for r in big.relators] + [to_indices("QPRQPR" * 4)]
    yield "todd_coxeter *237 / [QR,RP]^4", "todd_coxeter", (rels7, [], 10_000)
    for orders, rows in (((2, 4, 6), 12), ((2, 3, 12), 13), ((6, 6, 2), 10)):
        pres = build_triangle_group(*orders)
        yield f"low_index {pres.name} <= {rows}", "low_index", (pres._conjugates, [], rows, [0, 0, 0])


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"default backend: {_backend.BACKEND}")
    print(f"{'case':<34} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn, fargs in _cases():
        tp, rp = _time(getattr(_kernels_py, fn), fargs, args.repeat)
        if _compiled is None:
            print(f"{name:<34} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        tc, rc = _time(getattr(_compiled, fn), fargs, args.repeat)
        if rp != rc:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<34} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
