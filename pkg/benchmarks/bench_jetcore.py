"""Compare the compiled and numpy jet kernels.

    python3 benchmarks/bench_jetcore.py [--order 6] [--repeat 20]

Times each recurrence on a single point and on a 2048-sample batch, then the
full boundary scan (invariants and D) that the landmark detectors run.
"""
import argparse
import timeit

import numpy as np

from flatext import jets
from flatext.classify import _D_jet
from flatext.frames import BoundaryJets
from flatext.scenes import builtin


def kernel_cases(order, n, rng):
    a = rng.uniform(0.5, 1.5, (order + 1, n))
    b = rng.uniform(0.5, 1.5, (order + 1, n))
    return {"mul": lambda k: k.mul(a, b), "div": lambda k: k.div(a, b),
            "sqrt": lambda k: k.sqrt(a), "exp": lambda k: k.exp(a),
            "sincos": lambda k: k.sincos(a)}


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args()
    backends = jets.available_backends()  # sorted: cython before python
    if "cython" not in backends:
        print("compiled kernel not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'case':<24}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for n in (1, 2048):
        for name, fn in kernel_cases(args.order, n, rng).items():
            times = [best(lambda: fn(jets._BACKENDS[b]), args.repeat) for b in backends]
            row = f"{name + f' N={n}':<24}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
            if len(times) == 2:
                row += f"{times[1] / times[0]:>9.1f}x"
            print(row)
    S = builtin("example-1.4").surface
    ts = np.linspace(-1, 1, 2048)
    times = []
    for b in backends:
        prev = jets.set_backend(b)
        times.append(best(lambda: _D_jet(BoundaryJets(S, ts, args.order)), max(3, args.repeat // 4)))
        jets.set_backend(prev)
    row = f"{'D scan N=2048':<24}" + "".join(f"{t * 1e3:>12.1f}ms" for t in times)
    if len(times) == 2:
        row += f"{times[1] / times[0]:>9.1f}x"
    print(row)


if __name__ == "__main__":
    main()
