"""Compare the numba and numpy involution-census backends.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends must produce identical censuses; the script stops if they do not.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from unitedk import _kernels
from unitedk._kernels import involution_census

GROUPS = [(2, 2, 2, 2), (2, 2, 4), (4, 4), (2, 2, 2, 4), (2, 4, 4), (2, 2, 2, 2, 2),
          (2, 2, 2, 2, 4), (2, 2, 2, 2, 2, 2)]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    t = time.perf_counter()
    involution_census((2, 2), "numba")
    print(f"numba compile/load: {time.perf_counter() - t:.2f}s")
    print(f"{'group':<14}{'involutions':>12}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for orders in GROUPS:
        a = involution_census(orders, "numpy")
        b = involution_census(orders, "numba")
        for field in ("images", "admissible", "hist_plus", "hist_minus"):
            if not np.array_equal(getattr(a, field), getattr(b, field)):
                raise SystemExit(f"backends disagree on {orders} ({field})")
        reps = 1 if len(a) > 50000 else args.repeat
        tn = best_of(lambda: involution_census(orders, "numpy"), reps)
        tb = best_of(lambda: involution_census(orders, "numba"), reps)
        label = "+".join(map(str, orders))
        print(f"{label:<14}{len(a):>12}{tn:>10.4f}{tb:>10.4f}{tn / tb:>8.1f}x")


if __name__ == "__main__":
    main()
