"""Renyi estimate versus n for the truncated Laplace pair (0, 1), against quadrature."""

import argparse
from pathlib import Path

from dpaudit.cli import write_csv
from dpaudit.experiments import success_curve
from dpaudit.lrdp import estimate_pair_lrdp, plan_lrdp, practical_lrdp_plan
from dpaudit.mechanisms import TruncatedLaplace, UNIT
from dpaudit.oracle import mechanism_renyi


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--B", type=float, default=3.5)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--claimed-c", type=float, default=0.33,
                   help="Lipschitz constant used to choose m")
    p.add_argument("--tolerance", type=float, default=0.01,
                   help="distance from the oracle counted as a success")
    p.add_argument("--n", type=int, nargs="*", default=[10**3, 10**4, 10**5, 10**6])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("results/lrdp_success_curve.csv"))
    args = p.parse_args()

    mech = TruncatedLaplace(args.B)
    truth = mechanism_renyi(mech, 0.0, 1.0, args.alpha).value
    m = plan_lrdp(args.alpha, args.gamma, 0.9, args.claimed_c, UNIT).m
    plans = [practical_lrdp_plan(args.alpha, UNIT, m, n) for n in args.n]
    rows = success_curve(mech, 0.0, 1.0, plans, truth, args.tolerance, args.reps, args.seed,
                         False, estimate_pair_lrdp, args.workers)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(rows, args.out)
    print(f"oracle D_{args.alpha:g} = {truth:.5f}, m = {m}")
    for r in rows:
        print(f"n={r['n']:>8}  mean={r['mean']:.5f}  std={r['std']:.5f}  "
              f"within {args.tolerance:g}={r['success_within_gamma']:.2f}")


if __name__ == "__main__":
    main()
