#!/usr/bin/env python3
"""Slack of the relative eigenvalue bounds against the realised spectrum.

For each target k and rank deficiency, reports the median and minimum of
(bound gap) / (k |lambda_i|) over indices and trials: 0 means the bound is
attained. With r < n the ceiling is compared at a shifted index, so gaps
above 2 are common there.

    python3 scripts/bound_tightness.py --n 16 --trials 30
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from relbound import bounds as bd
from relbound.harness.generators import InstanceSpec, Signed, gen_hermitian, gen_perturbation


def tightness(n: int, rank: int, k: float, trials: int, seed: int):
    lo, hi = [], []
    for t in range(trials):
        A = gen_hermitian(InstanceSpec(n=n, rank=rank, spectrum=Signed(1e-2, 1e2), seed=seed + t))
        E = gen_perturbation(A, k, seed + t, kernel_component=True)
        report = bd.eigen_bounds(A, E, bd.k_sqrt(A, E))
        mu = np.linalg.eigvalsh(A + E)[::-1]
        for e in report.entries:
            width = k * abs(e.lambda_i)
            lo.append((mu[e.index - 1] - e.lower) / width)
            hi.append((e.upper - mu[e.upper_index - 1]) / width)
    return np.array(lo), np.array(hi)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    print(f"{'rank':>5} {'k':>5} {'lower med':>10} {'lower min':>10} {'upper med':>10} {'upper min':>10}")
    for rank in (args.n, (3 * args.n) // 4, args.n // 2):
        for k in (0.1, 0.5, 0.9, 1.0):
            lo, hi = tightness(args.n, rank, k, args.trials, args.seed)
            print(f"{rank:5d} {k:5.2f} {np.median(lo):10.3f} {lo.min():10.3f} {np.median(hi):10.3f} {hi.min():10.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
