"""Compiled vs pure-Python kernels on the resolution cube and Smith reduction.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from khcob import _kernels_py
from khcob.complex import complex_of
from khcob.diagram import OrientedDiagram
from khcob.movie import FIXTURES

try:
    from khcob import _kernels
except ImportError:
    _kernels = None


def cases():
    d = OrientedDiagram.load(FIXTURES / "8_18.json")
    a, b = d.smoothing_pairs
    yield "resolutions 8_18 (256 masks)", "all_resolutions", (len(d.members), a, b)
    cx = complex_of(d)
    for i, j in [(-3, -5), (-1, -1), (0, 1)]:
        dm = cx.differential(i, j).to_dense()
        yield f"smith 8_18 d^({i},{j}) {len(dm)}x{len(dm[0])}", "smith_reduce", (dm,)
    rng = random.Random(1)
    sparse = [[rng.choice([0] * 8 + [1, -1]) for _ in range(40)] for _ in range(40)]
    yield "smith random 40x40 sparse +-1", "smith_reduce", (sparse,)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if _kernels is None:
        print("compiled extension not built; nothing to compare")
        return
    print(f"{'case':40s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for label, fn, fargs in cases():
        times = []
        for mod in (_kernels_py, _kernels):
            f = getattr(mod, fn)
            try:
                t = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
            except OverflowError:
                # the compiled kernel bails out and the dispatcher uses Python
                t = float("nan")
            times.append(t * 1000)
        if times[1] != times[1]:
            print(f"{label:40s} {times[0]:10.2f} {'overflow':>10s} {'-':>8s}")
        else:
            print(f"{label:40s} {times[0]:10.2f} {times[1]:10.2f} {times[0] / times[1]:7.1f}x")


if __name__ == "__main__":
    main()
