"""Median sup-distance to the limiting profile as N grows, at fixed c.

    python scripts/convergence_trend.py --c 2 --seeds 10
"""

import argparse

import numpy as np

from dfs_shape.harness import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c", type=float, default=2.0)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    args = ap.parse_args()
    print("n,median_sup,min_sup,max_sup")
    prev = None
    for n in args.sizes:
        cfg = ExperimentConfig(n=n, c=args.c, seeds=tuple(range(args.seeds)), emit=set())
        sup = np.array([s.sup_distance for s in run_experiment(cfg) if s.accepted])
        med = float(np.median(sup))
        slope = "" if prev is None else f"  (log-log slope {np.log(med / prev[1]) / np.log(n / prev[0]):+.2f})"
        print(f"{n},{med:.5f},{sup.min():.5f},{sup.max():.5f}{slope}")
        prev = (n, med)


if __name__ == "__main__":
    main()
