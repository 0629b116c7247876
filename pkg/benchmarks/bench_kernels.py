"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs once per available backend; results are checked to agree.
"""

import argparse
import time
from contextlib import contextmanager

from k3mirror import kernels
from k3mirror.forms import forms_isomorphic, parse_form

QVALUE_CASES = [
    [8, 8, 8, 4],
    [9, 9, 3, 3, 3],
    [4, 4, 4, 4, 4, 4, 2],
]

ISO_CASES = [
    ("4w(3,1,1)", "3w(3,1,-1) + w(3,1,1)"),
    ("2w(2,2,3)", "2w(2,2,-5)"),
    ("u + v + 2w(2,1,1)", "3v + w(2,1,-1) + w(2,1,1)"),
    ("w(2,2,1) + w(2,2,5) + w(3,2,1)", "w(2,2,-3) + w(2,2,-1) + w(3,2,1)"),
]


@contextmanager
def backend(mod):
    saved = kernels.q_values, kernels.iso_backtrack
    kernels.q_values, kernels.iso_backtrack = mod.q_values, mod.iso_backtrack
    try:
        yield
    finally:
        kernels.q_values, kernels.iso_backtrack = saved


def _qvalues(orders):
    n = len(orders)
    N = [[(min(i, j) + 2 * max(i, j) + 1) % 7 for j in range(n)] for i in range(n)]
    return kernels.q_values(list(orders), N, 144)


def _iso(a, b):
    return forms_isomorphic(parse_form(a).form(), parse_form(b).form())


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    mods = kernels.backends()
    work = [(f"q_values {o}", lambda o=o: _qvalues(o)) for o in QVALUE_CASES]
    work += [(f"iso {a} ~ {b}", lambda a=a, b=b: _iso(a, b)) for a, b in ISO_CASES]

    names = [m.BACKEND for m in mods]
    print(f"{'workload':<62}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(mods) > 1 else ""))
    for label, fn in work:
        times, results = [], []
        for m in mods:
            with backend(m):
                t, r = timed(fn, args.repeat)
            times.append(t)
            results.append(r)
        if any(r != results[0] for r in results):
            raise SystemExit(f"backends disagree on {label}")
        row = f"{label[:61]:<62}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[-1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
