"""Time the compiled torus kernel against the numpy fallback.

    python3 benchmarks/bench_torus.py [--sizes 256,512,1024] [--repeat 3]
"""

import argparse
import time

import numpy as np

from crown_kernels import _accel, mat2
from crown_kernels.boundary import TorusGrid, boundary_map


def inputs(n: int, seed: int = 0):
    grid = TorusGrid(n, 1e-2)
    alpha = grid.nodes
    g = mat2.random_su11(np.random.default_rng(seed))
    u, jac = boundary_map(g, alpha)
    return alpha, u, jac


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="256,512,1024")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = _accel.kernels()
    print(f"active backend: {_accel.BACKEND}")
    if "compiled" not in impls:
        print("compiled extension not available; timing the fallback only")
    print(f"{'n':>6} " + " ".join(f"{name:>12}" for name in impls) + "   speedup   max|diff|")
    for n in (int(s) for s in args.sizes.split(",")):
        x, u, j = inputs(n)
        call = lambda f: f(x, x, u, u, j, j, 3, 1, 1, 1e-2, 0, n)  # noqa: E731
        times = {name: best_of(lambda f=f: call(f), args.repeat) for name, f in impls.items()}
        vals = {name: call(f) for name, f in impls.items()}
        ref = vals["python"]
        diff = max(abs(v - ref) / max(1.0, abs(ref)) for v in vals.values())
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{n:>6} " + " ".join(f"{times[name]:>11.4f}s" for name in impls) + f"   {speed:7.2f}x   {diff:.2e}")


if __name__ == "__main__":
    main()
