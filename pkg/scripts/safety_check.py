"""Honest and lying providers under the adjacent-bin safety check.

For each true scale B the mechanism is run against a claimed C; the output
lists the event frequency, the theoretical bound and the verdict.
"""

import argparse
from pathlib import Path

from dpaudit.cli import write_csv
from dpaudit.ldp import practical_ldp_plan
from dpaudit.mechanisms import TruncatedLaplace, UNIT, child_seed
from dpaudit.safety import SafetyConfig, run_safety_protocol


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--claimed-c", type=float, default=1.0)
    p.add_argument("--B", type=float, nargs="*", default=[0.4, 0.5, 0.7, 1.0, 2.0])
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("results/safety_check.csv"))
    args = p.parse_args()

    base = practical_ldp_plan(UNIT, args.m, 1)
    rows = []
    for i, B in enumerate(args.B):
        mech = TruncatedLaplace(B)
        v = run_safety_protocol(mech, 0.0, 1.0, SafetyConfig(args.claimed_c, runs=args.runs),
                                base, seed=child_seed(args.seed, i), workers=args.workers)
        rows.append({"B": B, "true_C": mech.exact_c(), "claimed_C": args.claimed_c,
                     "m": v.m, "n": v.n, "c": v.c, "frequency": v.empirical_frequency,
                     "bound": v.theoretical_bound, "threshold": v.decision_threshold,
                     "suspicious": v.suspicious})
        print(f"B={B:<4} true C={mech.exact_c():.3f}  frequency={v.empirical_frequency:.3f}  "
              f"bound={v.theoretical_bound:.3f}  suspicious={v.suspicious}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(rows, args.out)


if __name__ == "__main__":
    main()
