"""Compare the two time-stretch kernels: the numba-compiled scalar loop
and the pure-numpy vector implementation.

Both produce bit-identical output (test_stretch pins that); this script
only measures speed. Two workloads are timed: a click track (mostly
digital silence, where the compiled kernel skips zero-energy windows)
and sustained noise (dense audio, worst case for both). Run directly:

    python benchmarks/bench_kernels.py [--duration 10] [--repeats 7]

The numba timing excludes JIT compilation (one warmup call per case).
"""

import argparse
import math
import time

import numpy as np

from tempostego._kernels import active_backend, numba_stretch, numpy_stretch
from tempostego.harness import generate_click_track
from tempostego.stretch import StretchConfig


def best_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--duration", type=float, default=10.0,
                        help="input length in seconds (default: one slice)")
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--sr", type=int, default=44100)
    args = parser.parse_args()

    cfg = StretchConfig()
    seq = int(round(cfg.sequence_ms * args.sr / 1000.0))
    seek = int(round(cfg.seek_ms * args.sr / 1000.0))
    overlap = int(round(cfg.overlap_ms * args.sr / 1000.0))

    n = int(round(args.duration * args.sr))
    rng = np.random.default_rng(1)
    signals = {
        "click track": generate_click_track(120, args.duration,
                                            sample_rate=args.sr, seed=1).samples,
        "dense noise": rng.standard_normal(n) * 0.3,
    }

    print(f"input: {args.duration:g} s at {args.sr} Hz "
          f"({n} samples), {args.repeats} repeats, best-of shown")
    print(f"active backend for the library: {active_backend()} "
          "(set TEMPOSTEGO_NO_NUMBA=1 to force numpy)\n")
    header = f"{'signal':<12}  {'ratio':>6}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for name, x in signals.items():
        for ratio in (0.99, 1.01):
            n_out = int(math.floor(len(x) / ratio + 0.5))
            kernel_args = (x, ratio, seq, seek, overlap, n_out)
            np_best = best_time(numpy_stretch, kernel_args, args.repeats)
            if numba_stretch is None:
                print(f"{name:<12}  {ratio:>6}  {np_best * 1e3:>8.2f}ms  "
                      f"{'n/a':>10}  {'n/a':>8}")
                continue
            numba_stretch(*kernel_args)  # warm the JIT cache
            nb_best = best_time(numba_stretch, kernel_args, args.repeats)
            agree = np.array_equal(numpy_stretch(*kernel_args),
                                   numba_stretch(*kernel_args))
            note = "" if agree else "  !! outputs differ"
            print(f"{name:<12}  {ratio:>6}  {np_best * 1e3:>8.2f}ms  "
                  f"{nb_best * 1e3:>8.2f}ms  {np_best / nb_best:>7.2f}x{note}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
