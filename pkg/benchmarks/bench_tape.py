"""Time the compiled tape kernel against the pure-Python one.

    python3 benchmarks/bench_tape.py [--points N] [--repeat R]
"""

import argparse
import time

import numpy as np

from pfaffian import kernels
from pfaffian.parse import parse_expression
from pfaffian.tape import compile_tape, run_tape

CASES = {
    "polynomial": ("(x + y*z)^3 - x*y^2 + 3*z", ("x", "y", "z")),
    "trig": ("sin(x*y)^2 + cos(x*y)^2 - 1 + sin(z)*cos(x)", ("x", "y", "z")),
    "drag-alpha": ("mu*N*(v1^2 + v2^2 + v3^2)^(-1/2)*v1*v2", ("mu", "N", "v1", "v2", "v3")),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    rng = np.random.default_rng(0)
    print(f"{'case':<12} {'points':>7} " + " ".join(f"{b + ' ms':>12}" for b in backends) + "   speedup")
    for name, (text, names) in CASES.items():
        tape = compile_tape(parse_expression(text), names)
        pts = rng.uniform(0.5, 2.0, size=(args.points, len(names)))
        ref = run_tape(tape, pts, "python")[0]
        times = {}
        for b in backends:
            vals = run_tape(tape, pts, b)[0]
            assert np.allclose(vals, ref, rtol=1e-12, atol=1e-12)
            times[b] = best_of(lambda: run_tape(tape, pts, b), args.repeat)
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "   n/a"
        print(f"{name:<12} {args.points:>7} " + " ".join(f"{times[b] * 1e3:12.2f}" for b in backends) + f"  {speed}")


if __name__ == "__main__":
    main()
