"""Recompute reference tables I-V and write one CSV per table."""

import argparse
from pathlib import Path

from dpaudit.cli import write_csv
from dpaudit.experiments import TABLES


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("results/tables"))
    parser.add_argument("--which", nargs="*", default=list(TABLES), choices=list(TABLES))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.which:
        rows = TABLES[name]()
        write_csv(rows, args.out / f"table_{name}.csv")
        matched = sum(bool(r["match"]) for r in rows)
        print(f"table {name}: {matched}/{len(rows)} match -> {args.out / f'table_{name}.csv'}")


if __name__ == "__main__":
    main()
