"""Slack of both bounds along the umbilical family lambda*I, for a grid of c.

    python scripts/slack_landscape.py --n 4 --out-dir results/
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from deltaric import Config, OptimizerConfig, check_theorem1, check_theorem2, totally_geodesic, umbilical_non_j


def family(n, m, c, lam):
    return totally_geodesic(n, m, c) if lam == 0 else umbilical_non_j(n, m, c, lam)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--lam-max", type=float, default=2.0)
    ap.add_argument("--num", type=int, default=21)
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    cfg = Config(optimizer=OptimizerConfig(restarts=args.restarts))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n, m = args.n, args.n + 1
    path = out / f"slack_landscape_n{n}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["c", "lam", "theorem", "q", "delta", "bound", "slack"])
        for c in (-1.0, 0.0, 1.0):
            for lam in np.linspace(0, args.lam_max, args.num):
                inst = family(n, m, c, float(lam))
                reps = [check_theorem2(inst, q, cfg) for q in range(1, (n + 1) // 2)]
                if n % 2 == 0:
                    reps.append(check_theorem1(inst, cfg))
                for r in reps:
                    w.writerow([c, float(lam), r.theorem.value, r.q, r.lhs, r.rhs, r.slack])
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
