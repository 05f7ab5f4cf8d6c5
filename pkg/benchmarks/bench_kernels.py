"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--max-n 14] [--repeat 5]

Times the individual kernels on one random state and a full verification
sweep (all 2**n preparations) at each size.
"""
import argparse
import math
import timeit

import numpy as np

from psiontic import _backend, circuit, verifier


def bench_kernels(mod, n, repeat):
    rng = np.random.default_rng(0)
    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    amps /= np.linalg.norm(amps)
    cases = {
        "walsh_hadamard": lambda: mod.walsh_hadamard(amps),
        "phase_by_popcount": lambda: mod.phase_by_popcount(amps, n, 0.3),
        "product_amplitudes": lambda: mod.product_amplitudes(n, 0.9, 0.4, 5),
    }
    return {name: min(timeit.repeat(fn, number=20, repeat=repeat)) / 20 for name, fn in cases.items()}


def bench_verify(name, n, repeat):
    theta = 1.2
    params = circuit.solve_params(theta, n)
    previous = _backend.use_backend(name)
    try:
        fn = lambda: verifier.verify_nogo(theta, n, params=params, enumeration_cap=n)
        return min(timeit.repeat(fn, number=1, repeat=repeat))
    finally:
        _backend.use_backend(previous)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=14)
    parser.add_argument("--verify-max-n", type=int, default=11)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = sorted(_backend.AVAILABLE)
    print(f"backends: {backends}")
    print(f"{'kernel':<20}{'n':>4}" + "".join(f"{b + ' (us)':>16}" for b in backends) + f"{'speedup':>10}")
    for n in range(4, args.max_n + 1, 2):
        rows = {b: bench_kernels(_backend.AVAILABLE[b], n, args.repeat) for b in backends}
        for kernel in rows[backends[0]]:
            times = [rows[b][kernel] * 1e6 for b in backends]
            speed = rows["python"][kernel] / rows["cython"][kernel] if "cython" in rows else math.nan
            print(f"{kernel:<20}{n:>4}" + "".join(f"{t:>16.1f}" for t in times) + f"{speed:>10.2f}")

    print(f"\n{'verify_nogo (all preparations)':<30}")
    for n in range(4, args.verify_max_n + 1):
        times = {b: bench_verify(b, n, max(1, args.repeat // 2)) for b in backends}
        speed = times["python"] / times["cython"] if "cython" in times else math.nan
        print(f"  n={n:<3}" + "".join(f"{b}: {t * 1e3:9.2f} ms  " for b, t in times.items()) + f"speedup {speed:.2f}")


if __name__ == "__main__":
    main()
