"""log10 of the theoretical sample size along gamma, delta, C and alpha."""

import argparse
from pathlib import Path

import numpy as np

from dpaudit.cli import write_csv
from dpaudit.experiments import sweep

SWEEPS = {
    ("ldp", "gamma"): np.geomspace(1.0, 0.02, 25),
    ("ldp", "delta"): np.linspace(0.05, 0.99, 25),
    ("ldp", "C"): np.linspace(0.05, 1.99, 25),
    ("lrdp", "gamma"): np.geomspace(1.0, 0.05, 20),
    ("lrdp", "alpha"): np.linspace(1.1, 6.0, 20),
    ("lrdp", "C"): np.linspace(0.05, 1.5, 20),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("results/sweeps"))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for (kind, param), values in SWEEPS.items():
        rows = sweep(param, values, kind)
        path = args.out / f"sweep_{kind}_{param}.csv"
        write_csv(rows, path, ["parameter", "value", "m", "n", "log10_n", "status"])
        logs = [r["log10_n"] for r in rows if r["status"] == "ok"]
        print(f"{kind} {param}: log10 n from {logs[0]:.2f} to {logs[-1]:.2f} -> {path}")


if __name__ == "__main__":
    main()
