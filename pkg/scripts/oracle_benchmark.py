"""Multi-start optimizer vs. Haar random search for K_q^inf.

For each seeded random instance prints the optimizer value, the best of N Haar
frames, and how many distinct local minima the restarts reached.

    python scripts/oracle_benchmark.py --instances 20 --samples 100000
"""

import argparse
import time

import numpy as np

from deltaric import OptimizerConfig, gauss_curvature_tensor, haar_oracle, k_q_inf, random_totally_real


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--restarts", type=int, default=32)
    args = ap.parse_args()

    print(f"{'seed':>4} {'n':>2} {'q':>2} {'optimizer':>12} {'haar best':>12} {'gap':>10} {'basins':>6} {'sec':>5}")
    for i in range(args.instances):
        n, q = (4, 6)[i % 2], (1, 2)[(i // 2) % 2]
        R = gauss_curvature_tensor(random_totally_real(n, n + 1, 0.0, 1.0, seed=i))
        t0 = time.perf_counter()
        val, _, diag = k_q_inf(R, q, OptimizerConfig(restarts=args.restarts))
        dt = time.perf_counter() - t0
        oracle, _ = haar_oracle(R, q, args.samples, seed=i)
        basins = len(np.unique(np.round(diag.restart_values, 6)))
        print(f"{i:>4} {n:>2} {q:>2} {val:>12.6f} {oracle:>12.6f} {oracle - val:>10.2e} {basins:>6} {dt:>5.2f}")


if __name__ == "__main__":
    main()
