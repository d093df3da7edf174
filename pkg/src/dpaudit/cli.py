"""``dpaudit`` command line."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from .core import InfeasiblePlanError, PlanError, TheoremInapplicableError, default_workers
from .experiments import (
    MODES, TABLES, AuditConfig, ConfigError, EstimationFailed, build_plan, run_audit, sweep,
)
from .mechanisms import DomainError, parse_mechanism_spec

EXIT_OK = 0
EXIT_INAPPLICABLE = 2
EXIT_INFEASIBLE = 3
EXIT_FAILED = 4
EXIT_CONFIG = 5

SEED_ENV = "DPAUDIT_SEED"


# ---------------------------------------------------------------------------
# Output helpers


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dump_json(obj, path: Path | None = None) -> str:
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    if path is not None:
        path.write_text(text + "\n", encoding="utf-8")
    return text


def write_csv(rows: list[dict], path: Path, columns: Sequence[str] | None = None) -> None:
    """UTF-8 CSV with a header; floats are written at full round-trip precision."""
    if columns is None:
        columns = []
        for row in rows:
            columns += [k for k in row if k not in columns]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else repr(float(row[c]))
                             if isinstance(row.get(c), (float, np.floating)) else row.get(c)
                             for c in columns])


def _scalar_rows(rows: list[dict]) -> list[dict]:
    return [{k: v for k, v in r.items() if not isinstance(v, (list, tuple, dict, np.ndarray))}
            for r in rows]


# ---------------------------------------------------------------------------
# Config assembly


def _pair(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated values")
    return tuple(int(p) if p.lstrip("-").isdigit() else float(p) for p in parts)


def _interval(text: str):
    lo, hi = _pair(text)
    return float(lo), float(hi)


def _coerce(value: str):
    try:
        return yaml.safe_load(value)
    except yaml.YAMLError:
        return value


def load_config_file(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    data = yaml.safe_load(text)  # YAML is a superset of JSON
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return data


FLAG_FIELDS = {
    "mode": "mode", "gamma": "gamma", "delta": "delta", "alpha": "alpha",
    "claimed_c": "claimed_c", "claimed_d": "claimed_d", "pair": "pair",
    "x_interval": "x_interval", "z_interval": "z_interval", "n": "n", "m": "m", "k": "k",
    "p_min": "p_min", "seed": "seed", "reps": "reps", "slack_c": "slack_c",
    "required_probability": "required_probability",
}


def assemble_config(args: argparse.Namespace, forced_mode: str | None = None,
                    defaults: dict | None = None) -> AuditConfig:
    data: dict = dict(defaults or {})
    if getattr(args, "config", None):
        file_data = load_config_file(args.config)
        if isinstance(file_data.get("config"), dict):
            file_data = file_data["config"]
        data.update(file_data)
    for flag, key in FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[key] = value
    if getattr(args, "mechanism", None):
        data["mechanism"] = {k: _coerce(v) if k != "kind" else v
                             for k, v in parse_mechanism_spec(args.mechanism).items()}
    if getattr(args, "with_oracle", False):
        data["with_oracle"] = True
    if getattr(args, "directed", False):
        data["symmetric"] = False
    if forced_mode is not None:
        data["mode"] = forced_mode
    if "seed" not in data or data["seed"] is None:
        env = os.environ.get(SEED_ENV)
        if env is not None:
            try:
                data["seed"] = int(env)
            except ValueError:
                raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    try:
        cfg = AuditConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# Commands


def _out_dir(args) -> Path | None:
    if not getattr(args, "out", None):
        return None
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_plan(args) -> int:
    cfg = assemble_config(args)
    plan = build_plan(cfg)
    text = dump_json({"config": cfg.to_dict(), **plan})
    out = _out_dir(args)
    if out:
        (out / "plan.json").write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def _write_report(report: dict, out: Path | None) -> None:
    if out is None:
        return
    dump_json(report, out / "report.json")
    if report.get("runs"):
        write_csv(_scalar_rows(report["runs"]), out / "runs.csv")
    grid_rows = [p for r in report.get("runs", []) for p in
                 ({**pair, "run": r["run"]} for pair in r.get("pairs", []))]
    if grid_rows:
        write_csv(_scalar_rows(grid_rows), out / "grid.csv")
    if "verdict" in report:
        events = report["verdict"]["events"]
        write_csv([{"run": i, "event": int(e)} for i, e in enumerate(events)],
                  out / "runs.csv")


def _print_summary(report: dict) -> None:
    lines = [f"mode: {report['mode']}", f"guarantee: {report.get('guarantee')}"]
    plan = report.get("plan") or {}
    if "m" in plan:
        lines.append(f"plan: m={plan['m']} n={plan['n']}")
    if "grid" in report:
        lines.append(f"grid: k={report['grid']['k']}")
    summary = report.get("summary")
    if summary:
        mean = summary.get("mean")
        lines.append(f"runs: {summary['runs']} succeeded: {summary['succeeded']} "
                     f"failed: {summary['failed']}"
                     + (f" mean estimate: {mean:.4f}" if mean is not None else ""))
        if "truth" in summary:
            lines.append(f"oracle: {summary['truth']:.4f}")
        if "success_within_gamma" in summary:
            lines.append(f"success within gamma: {summary['success_within_gamma']:.3f}")
    if "verdict" in report:
        v = report["verdict"]
        lines.append(f"event frequency {v['empirical_frequency']:.4f}, bound "
                     f"{v['theoretical_bound']:.4f}, threshold {v['decision_threshold']:.4f}: "
                     + ("SUSPICIOUS" if v["suspicious"] else "consistent with claim"))
    if "demo" in report:
        d = report["demo"]
        lines.append(f"missed eps*={d['truth']:.4f} by more than {d['gamma']:g}: "
                     f"{d['missed']}/{report['summary']['runs']}")
    print("\n".join(lines))


def _run(args, forced_mode: str | None = None, defaults: dict | None = None) -> int:
    cfg = assemble_config(args, forced_mode, defaults)
    workers = args.workers if args.workers is not None else default_workers()
    out = _out_dir(args)
    try:
        report = run_audit(cfg, workers=workers)
    except EstimationFailed as exc:
        _write_report(exc.report, out)
        s = exc.report["summary"]
        print(f"estimation failed in all {s['runs']} runs ({s['failed']} failures)",
              file=sys.stderr)
        return EXIT_FAILED
    _write_report(report, out)
    _print_summary(report)
    return EXIT_OK


def cmd_run(args) -> int:
    return _run(args)


def cmd_safety(args) -> int:
    return _run(args, "safety")


def cmd_demo(args) -> int:
    defaults = {"mechanism": {"kind": "adversarial-bernoulli", "d": 1e-6, "h": 1e3},
                "pair": (0, 1), "n": 1000, "gamma": 1.0, "reps": 100}
    return _run(args, "impossibility-demo", defaults)


def cmd_tables(args) -> int:
    names = list(TABLES) if args.which == "all" else [args.which]
    out = _out_dir(args)
    for name in names:
        rows = TABLES[name]()
        if out:
            write_csv(rows, out / f"table_{name}.csv")
        ok = sum(bool(r.get("match")) for r in rows)
        print(f"table {name}: {ok}/{len(rows)} rows match the published values"
              + (" (known discrepancy)" if name == "V" else ""))
    return EXIT_OK


def _values(args) -> list[float]:
    if args.values:
        return [float(v) for v in args.values.split(",")]
    start, stop, num = args.range.split(",")
    return list(np.linspace(float(start), float(stop), int(num)))


def cmd_sweep(args) -> int:
    fixed = {}
    for item in args.fixed or []:
        key, _, value = item.partition("=")
        fixed[key.strip()] = float(value)
    if args.parameter == "alpha" and args.kind == "ldp":
        raise ConfigError("alpha sweeps need --kind lrdp")
    try:
        rows = sweep(args.parameter, _values(args), args.kind, fixed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    out = _out_dir(args)
    columns = ["parameter", "value", "m", "n", "log10_n", "status"]
    if out:
        write_csv(rows, out / f"sweep_{args.kind}_{args.parameter}.csv", columns)
    for r in rows:
        print(f"{r['parameter']}={r['value']:.6g}  m={r['m']}  n={r['n']}  "
              f"log10 n={r['log10_n']:.3f}  {r['status']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    """Usage errors are config errors, not the exit code reserved for inapplicable plans."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _audit_flags(p: argparse.ArgumentParser, with_mode: bool = True) -> None:
    p.add_argument("--config", help="YAML or JSON config file (a saved report also works)")
    if with_mode:
        p.add_argument("--mode", choices=MODES)
    p.add_argument("--mechanism", help="kind:key=value,... e.g. trunc-laplace:B=1")
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--claimed-c", dest="claimed_c", type=float)
    p.add_argument("--claimed-d", dest="claimed_d", type=float)
    p.add_argument("--pair", type=_pair, metavar="X1,X2")
    p.add_argument("--x-interval", dest="x_interval", type=_interval, metavar="C,D")
    p.add_argument("--z-interval", dest="z_interval", type=_interval, metavar="A,B")
    p.add_argument("--n", type=int, help="sample-size override (voids the guarantee)")
    p.add_argument("--m", type=int, help="bin-count override (voids the guarantee)")
    p.add_argument("--k", type=int, help="grid-size override (voids the guarantee)")
    p.add_argument("--p-min", dest="p_min", type=float, help="category mass floor (k-RR)")
    p.add_argument("--seed", type=int, help=f"root seed (default ${SEED_ENV} or 0)")
    p.add_argument("--reps", type=int)
    p.add_argument("--out", help="directory for report.json / CSV extracts")
    p.add_argument("--with-oracle", dest="with_oracle", action="store_true")
    p.add_argument("--directed", action="store_true",
                   help="estimate eps(x1, x2) only instead of the max over both orders")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dpaudit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="compute m, n (and k) without sampling")
    _audit_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("run", help="run an audit and write a report")
    _audit_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("safety", help="test a claimed Lipschitz constant")
    _audit_flags(p, with_mode=False)
    p.add_argument("--slack", dest="slack_c", type=float, help="slack c (default C w^2 / 2)")
    p.add_argument("--required-probability", dest="required_probability", type=float)
    p.set_defaults(func=cmd_safety)

    p = sub.add_parser("demo-impossibility",
                       help="show a fixed-n estimator missing a hidden rare outcome")
    _audit_flags(p, with_mode=False)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("tables", help="recompute the reference tables as CSV")
    p.add_argument("which", choices=[*TABLES, "all"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("sweep", help="log10 n along one planning parameter")
    p.add_argument("parameter", choices=["gamma", "delta", "C", "alpha"])
    p.add_argument("--kind", choices=["ldp", "lrdp"], default="ldp")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--values", help="comma-separated values")
    g.add_argument("--range", help="start,stop,num (linear)")
    p.add_argument("--fixed", action="append", metavar="KEY=VALUE",
                   help="override a fixed parameter (gamma, delta, C, alpha)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TheoremInapplicableError as exc:
        print(f"theorem inapplicable: {exc}",
              file=sys.stderr)
        return EXIT_INAPPLICABLE
    except InfeasiblePlanError as exc:
        print(f"plan infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, DomainError, PlanError, ValueError, OSError, yaml.YAMLError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
