"""Audit configuration, end-to-end runs, table reproduction and sweeps."""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import reference_values as ref
from .core import EstimateReport, PlanError, TheoremInapplicableError, parallel_map
from .ldp import (
    GridPlan, LdpPlan, estimate_discrete_ldp, estimate_grid_ldp, estimate_pair_ldp,
    ldp_bin_count, ldp_grid_size, ldp_sample_requirement, plan_grid_ldp, plan_ldp,
    practical_ldp_plan, PRACTICAL,
)
from .lrdp import (
    estimate_grid_lrdp, estimate_pair_lrdp, lrdp_constants, lrdp_grid_size, plan_grid_lrdp,
    plan_lrdp, practical_lrdp_plan,
)
from .mechanisms import (
    Interval, Mechanism, TruncatedGaussian, TruncatedLaplace, UNIT, child_seed,
    lipschitz_constants, mechanism_from_config, trunc_laplace_exact_c,
)
from .oracle import mechanism_eps_pair, mechanism_renyi, oracle_eps_global
from .safety import SafetyConfig, run_safety_protocol

MODES = ("ldp-pair", "ldp-grid", "lrdp-pair", "lrdp-grid", "safety", "impossibility-demo")


class ConfigError(ValueError):
    pass


class EstimationFailed(RuntimeError):
    def __init__(self, report: dict):
        self.report = report
        super().__init__("every run failed")


@dataclass
class AuditConfig:
    mode: str = "ldp-pair"
    mechanism: dict = field(default_factory=lambda: {"kind": "trunc-laplace", "B": 1.0})
    gamma: float | None = None
    delta: float | None = None
    alpha: float | None = None
    claimed_c: float | None = None
    claimed_d: float | None = None
    pair: tuple[Any, Any] | None = None
    x_interval: tuple[float, float] | None = None
    z_interval: tuple[float, float] | None = None
    m: int | None = None
    n: int | None = None
    k: int | None = None
    p_min: float | None = None
    seed: int = 0
    reps: int | None = None
    symmetric: bool = True
    with_oracle: bool = False
    required_probability: float = 0.9
    slack_c: float | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "AuditConfig":
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]  # a saved report
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        for key in ("pair", "x_interval", "z_interval"):
            value = getattr(cfg, key)
            if value is not None:
                setattr(cfg, key, tuple(value))
        return cfg

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key in ("pair", "x_interval", "z_interval"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    # derived pieces -------------------------------------------------------

    @property
    def support(self) -> Interval:
        if self.z_interval is not None:
            return Interval(*map(float, self.z_interval))
        sup = self.mechanism.get("support") if self.mechanism else None
        return Interval(*map(float, sup)) if sup else UNIT

    @property
    def secrets(self) -> Interval:
        if self.x_interval is not None:
            return Interval(*map(float, self.x_interval))
        sec = self.mechanism.get("secrets") if self.mechanism else None
        return Interval(*map(float, sec)) if sec else self.support

    def build_mechanism(self) -> Mechanism:
        cfg = dict(self.mechanism)
        if cfg.get("kind") in ("trunc-laplace", "trunc-gaussian"):
            cfg["support"] = self.support.to_list()
            cfg["secrets"] = self.secrets.to_list()
        return mechanism_from_config(cfg)

    @property
    def overridden(self) -> bool:
        return any(v is not None for v in (self.m, self.n, self.k))

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        need: list[str] = []
        if self.mode in ("ldp-pair", "lrdp-pair", "safety") and self.pair is None:
            need.append("pair")
        if self.mode.startswith("lrdp") and self.alpha is None:
            need.append("alpha")
        if self.mode.endswith("grid") and self.k is None and self.claimed_d is None:
            need.append("claimed_d (or k)")
        if self.mode == "safety" and self.claimed_c is None:
            need.append("claimed_c")
        if need:
            raise ConfigError(f"mode {self.mode} needs: {', '.join(need)}")
        if self.reps is not None and self.reps < 1:
            raise ConfigError("reps must be positive")
        try:
            self.build_mechanism()
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"mechanism: {exc}") from None


def _default_reps(cfg: AuditConfig) -> int:
    if cfg.reps is not None:
        return cfg.reps
    return {"safety": 1000, "impossibility-demo": 100}.get(cfg.mode, 1)


# ---------------------------------------------------------------------------
# Planning


def _pair_plan(cfg: AuditConfig, kind: str, gamma: float, delta: float):
    """Theoretical plan, or a practical one when (m, n) overrides are set."""
    support = cfg.support
    if kind == "ldp":
        if cfg.m is not None and cfg.n is not None:
            return practical_ldp_plan(support, cfg.m, cfg.n, gamma, delta, cfg.claimed_c)
        if cfg.claimed_c is None:
            raise ConfigError("claimed_c is required unless both m and n are given")
        if cfg.m is None and cfg.n is None:
            return plan_ldp(gamma, delta, cfg.claimed_c, support)
        base = plan_ldp(gamma, delta, cfg.claimed_c, support)
        return practical_ldp_plan(support, cfg.m or base.m, cfg.n or base.n, gamma, delta,
                                  cfg.claimed_c)
    alpha = float(cfg.alpha)
    if cfg.m is not None and cfg.n is not None:
        return practical_lrdp_plan(alpha, support, cfg.m, cfg.n, gamma, delta)
    if cfg.claimed_c is None:
        raise ConfigError("claimed_c is required unless both m and n are given")
    base = plan_lrdp(alpha, gamma, delta, cfg.claimed_c, support)
    if cfg.m is None and cfg.n is None:
        return base
    return practical_lrdp_plan(alpha, support, cfg.m or base.m, cfg.n or base.n, gamma, delta)


def _gamma_delta(cfg: AuditConfig) -> tuple[float, float]:
    return (cfg.gamma if cfg.gamma is not None else 0.5,
            cfg.delta if cfg.delta is not None else 0.8)


def build_plan(cfg: AuditConfig) -> dict:
    """Plan for ``cfg`` as a dict: pair plan and, for grid modes, the grid."""
    cfg.validate()
    gamma, delta = _gamma_delta(cfg)
    if cfg.mode in ("ldp-pair", "lrdp-pair"):
        kind = cfg.mode.split("-")[0]
        plan = _pair_plan(cfg, kind, gamma, delta)
        return {"pair_plan": plan.to_dict(), "guarantee": plan.guarantee}
    if cfg.mode in ("ldp-grid", "lrdp-grid"):
        inner, grid = _grid_plans(cfg, gamma, delta)
        return {"pair_plan": inner.to_dict(), "grid": grid.to_dict(),
                "guarantee": PRACTICAL if cfg.overridden else inner.guarantee}
    if cfg.mode == "safety":
        base = _safety_base_plan(cfg, gamma, delta)
        return {"pair_plan": base.to_dict(), "guarantee": base.guarantee}
    return {"n": cfg.n or 1000, "guarantee": PRACTICAL}


def _grid_plans(cfg: AuditConfig, gamma: float, delta: float):
    X, Z = cfg.secrets, cfg.support
    D = cfg.claimed_d
    kind = cfg.mode.split("-")[0]
    inner_gamma, inner_delta = gamma / 3.0, math.sqrt(delta)
    if cfg.m is None or cfg.n is None or cfg.k is None:
        if cfg.claimed_c is None:
            raise ConfigError("claimed_c is required unless m, n and k are all given")
        if kind == "ldp":
            theo_inner, theo_grid = (plan_grid_ldp(gamma, delta, cfg.claimed_c, D, X, Z)
                                     if cfg.m is None or cfg.n is None else (None, None))
        else:
            theo_inner, theo_grid = (plan_grid_lrdp(cfg.alpha, gamma, delta, cfg.claimed_c, D, X, Z)
                                     if cfg.m is None or cfg.n is None else (None, None))
    else:
        theo_inner = theo_grid = None
    if not cfg.overridden:
        return theo_inner, theo_grid
    if cfg.k is not None:
        k = cfg.k
    elif theo_grid is not None:
        k = theo_grid.k
    else:
        W = Z.width
        if kind == "ldp":
            tau, _ = ldp_bin_count(cfg.claimed_c, W, gamma)
            k = ldp_grid_size(D, X.width, tau, gamma)
        else:
            k = lrdp_grid_size(cfg.alpha, lrdp_constants(cfg.alpha, cfg.claimed_c, W), D,
                               X.width, gamma)
    m = cfg.m if cfg.m is not None else theo_inner.m
    n = cfg.n if cfg.n is not None else theo_inner.n
    if kind == "ldp":
        inner = practical_ldp_plan(Z, m, n, inner_gamma, inner_delta, cfg.claimed_c)
    else:
        inner = practical_lrdp_plan(cfg.alpha, Z, m, n, inner_gamma, inner_delta)
    return inner, GridPlan(X, D if D is not None else float("nan"), k)


def _safety_base_plan(cfg: AuditConfig, gamma: float, delta: float) -> LdpPlan:
    if cfg.m is not None:
        n = cfg.n or 1
        return practical_ldp_plan(cfg.support, cfg.m, n, gamma, delta, cfg.claimed_c)
    return plan_ldp(gamma, delta, cfg.claimed_c, cfg.support)


# ---------------------------------------------------------------------------
# Running


def _truth(cfg: AuditConfig, mechanism: Mechanism, x1=None, x2=None) -> float | None:
    kind = cfg.mode.split("-")[0]
    try:
        if cfg.mode.endswith("grid"):
            if kind == "ldp":
                return oracle_eps_global(mechanism, x_points=101, z_points=4001).value
            xs = cfg.secrets
            # the extremes pair is the maximiser for the unimodal reference families
            return max(mechanism_renyi(mechanism, xs.lo, xs.hi, cfg.alpha).value,
                       mechanism_renyi(mechanism, xs.hi, xs.lo, cfg.alpha).value)
        if kind == "ldp" or cfg.mode == "impossibility-demo" and _demo_is_ldp(mechanism):
            a = mechanism_eps_pair(mechanism, x1, x2).value
            if not cfg.symmetric:
                return a
            return max(a, mechanism_eps_pair(mechanism, x2, x1).value)
        a = mechanism_renyi(mechanism, x1, x2, cfg.alpha if cfg.alpha else mechanism.alpha).value
        if not cfg.symmetric:
            return a
        alpha = cfg.alpha if cfg.alpha else mechanism.alpha
        return max(a, mechanism_renyi(mechanism, x2, x1, alpha).value)
    except (AttributeError, NotImplementedError, TypeError):
        return None


def _demo_is_ldp(mechanism) -> bool:
    return math.isinf(getattr(mechanism, "alpha", math.inf))


def _pair_job(r, *, estimator, mechanism, x1, x2, plan, seed, symmetric):
    est = estimator(mechanism, x1, x2, plan, child_seed(seed, r), symmetric=symmetric)
    return {"run": r, "status": est.status, "estimate": est.epsilon_hat,
            "argmax_bin": est.argmax_bin,
            "counts_p": est.histogram.counts_p.tolist(),
            "counts_q": est.histogram.counts_q.tolist()}


def _discrete_job(r, *, mechanism, x1, x2, gamma, delta, p_min, n, seed, symmetric):
    est = estimate_discrete_ldp(mechanism, x1, x2, gamma, delta, p_min, child_seed(seed, r),
                                n=n, symmetric=symmetric)
    return {"run": r, "status": est.status, "estimate": est.epsilon_hat,
            "argmax_bin": est.argmax_bin, "plan": est.plan.to_dict(),
            "counts_p": est.histogram.counts_p.tolist(),
            "counts_q": est.histogram.counts_q.tolist()}


def _grid_job(r, *, estimator, mechanism, plan, grid, seed, symmetric):
    rep = estimator(mechanism, plan, grid, child_seed(seed, r), symmetric=symmetric)
    d = rep.to_dict()
    d["run"] = r
    d.pop("plan")
    d.pop("grid")
    return d


def _summarise(runs: list[dict], truth: float | None, gamma: float | None) -> dict:
    ests = [r["estimate"] for r in runs if r["status"] == "succeeded"]
    out = {"runs": len(runs), "succeeded": len(ests), "failed": len(runs) - len(ests),
           "mean": float(np.mean(ests)) if ests else None,
           "std": float(np.std(ests)) if ests else None}
    if truth is not None:
        out["truth"] = truth
        if gamma is not None:
            hits = [r["status"] == "succeeded" and abs(r["estimate"] - truth) <= gamma
                    for r in runs]
            for r, h in zip(runs, hits):
                r["within_gamma"] = bool(h)
            out["success_within_gamma"] = float(np.mean(hits))
    return out


def run_audit(cfg: AuditConfig, workers: int = 1) -> dict:
    """Execute ``cfg`` and return a JSON-serialisable report.

    Raises :class:`EstimationFailed` (carrying the report) if every run failed.
    """
    cfg.validate()
    start = time.perf_counter()
    reps = _default_reps(cfg)
    gamma, delta = _gamma_delta(cfg)
    mechanism = cfg.build_mechanism()
    report: dict = {"config": cfg.to_dict(), "mode": cfg.mode}
    seed = cfg.seed

    if cfg.mode == "safety":
        base = _safety_base_plan(cfg, gamma, delta)
        verdict = run_safety_protocol(
            mechanism, cfg.pair[0], cfg.pair[1],
            SafetyConfig(cfg.claimed_c, cfg.slack_c, cfg.required_probability, reps),
            base, seed, workers)
        report.update(plan=base.to_dict(), guarantee=base.guarantee, verdict=verdict.to_dict())
        report["wall_time"] = time.perf_counter() - start
        return report

    if cfg.mode == "impossibility-demo":
        x1, x2 = cfg.pair if cfg.pair is not None else (0, 1)
        n = cfg.n or 1000
        demo_gamma = cfg.gamma if cfg.gamma is not None else 1.0
        if _demo_is_ldp(mechanism):
            job = _partial(_discrete_job, mechanism=mechanism, x1=x1, x2=x2, gamma=demo_gamma,
                           delta=delta, p_min=None, n=n, seed=seed, symmetric=cfg.symmetric)
        else:
            plan = practical_lrdp_plan(mechanism.alpha, UNIT, 2, n, demo_gamma, delta)
            job = _partial(_pair_job, estimator=estimate_pair_lrdp, mechanism=mechanism,
                           x1=x1, x2=x2, plan=plan, seed=seed, symmetric=cfg.symmetric)
        runs = parallel_map(job, range(reps), workers)
        truth = _truth(cfg, mechanism, x1, x2)
        missed = [r["status"] != "succeeded" or r["estimate"] < truth - demo_gamma for r in runs]
        report.update(plan={"n": n}, guarantee=PRACTICAL, runs=runs,
                      summary=_summarise(runs, truth, demo_gamma),
                      demo={"truth": truth, "gamma": demo_gamma, "missed": int(sum(missed)),
                            "fraction_missed": float(np.mean(missed))})
        report["wall_time"] = time.perf_counter() - start
        return report

    kind = cfg.mode.split("-")[0]
    if cfg.mode.endswith("pair"):
        x1, x2 = cfg.pair
        if mechanism.discrete and kind == "ldp":
            job = _partial(_discrete_job, mechanism=mechanism, x1=x1, x2=x2, gamma=gamma,
                           delta=delta, p_min=cfg.p_min, n=cfg.n, seed=seed,
                           symmetric=cfg.symmetric)
            runs = parallel_map(job, range(reps), workers)
            plan_dict = runs[0].pop("plan")
            for r in runs[1:]:
                r.pop("plan")
            guarantee = plan_dict["guarantee"]
        else:
            if mechanism.discrete:
                plan = practical_lrdp_plan(cfg.alpha, UNIT, mechanism.num_outcomes,
                                           cfg.n or 1000, gamma, delta)
            else:
                plan = _pair_plan(cfg, kind, gamma, delta)
            estimator = estimate_pair_ldp if kind == "ldp" else estimate_pair_lrdp
            job = _partial(_pair_job, estimator=estimator, mechanism=mechanism, x1=x1, x2=x2,
                           plan=plan, seed=seed, symmetric=cfg.symmetric)
            runs = parallel_map(job, range(reps), workers)
            plan_dict, guarantee = plan.to_dict(), plan.guarantee
        truth = _truth(cfg, mechanism, x1, x2) if (cfg.with_oracle or reps > 1) else None
        report.update(plan=plan_dict, guarantee=guarantee, runs=runs,
                      summary=_summarise(runs, truth, gamma))
    else:
        inner, grid = _grid_plans(cfg, gamma, delta)
        estimator = estimate_grid_ldp if kind == "ldp" else estimate_grid_lrdp
        job = _partial(_grid_job, estimator=estimator, mechanism=mechanism, plan=inner,
                       grid=grid, seed=seed, symmetric=cfg.symmetric)
        runs = parallel_map(job, range(reps), workers)
        truth = _truth(cfg, mechanism) if (cfg.with_oracle or reps > 1) else None
        guarantee = PRACTICAL if cfg.overridden else inner.guarantee
        report.update(plan=inner.to_dict(), grid=grid.to_dict(), guarantee=guarantee, runs=runs,
                      summary=_summarise(runs, truth, gamma))
    report["wall_time"] = time.perf_counter() - start
    if report["summary"]["succeeded"] == 0:
        raise EstimationFailed(report)
    return report


def _partial(fn, **kwargs):
    from functools import partial
    return partial(fn, **kwargs)


# ---------------------------------------------------------------------------
# Tables


def _sig_round(x: float, digits: int) -> float:
    if x == 0:
        return 0.0
    return round(x, digits - 1 - int(math.floor(math.log10(abs(x)))))


def n_matches(computed: int, published: float, digits: int | None, rel: float = 0.01) -> bool:
    """Within ``rel`` of the published value, or equal at its printed precision."""
    if abs(computed - published) <= rel * published:
        return True
    return digits is not None and _sig_round(computed, digits) == _sig_round(published, digits)


def table_i(grid_points: int = 100_000) -> list[dict]:
    rows = []
    for family, param, D_ref, C_ref, eps_ref, ok_ref in ref.TABLE_I:
        mech = TruncatedLaplace(param) if family == "trunc-laplace" else TruncatedGaussian(param)
        lc = lipschitz_constants(mech, grid_points=grid_points)
        eps = oracle_eps_global(mech, x_points=101, z_points=4001).value
        match = (abs(lc.C - C_ref) <= 0.02 and abs(lc.D - D_ref) <= 0.02
                 and abs(eps - eps_ref) <= 0.02 and lc.theorem_applicable == ok_ref)
        rows.append({"family": family, "parameter": param, "C": lc.C, "D": lc.D, "eps": eps,
                     "applicable": lc.theorem_applicable, "C_published": C_ref,
                     "D_published": D_ref, "eps_published": eps_ref,
                     "applicable_published": ok_ref, "match": match})
    return rows


def table_ii(n: int = 100_000, m: int = 91, seed: int = 0) -> list[dict]:
    B, gamma = ref.TABLE_II["B"], ref.TABLE_II["gamma"]
    mech = TruncatedLaplace(B)
    plan = practical_ldp_plan(UNIT, m, n, gamma, ref.TABLE_II["delta"])
    rows = []
    for i, (xi, xj, published) in enumerate(ref.TABLE_II["rows"]):
        truth = max(mech.eps_pair(xi, xj), mech.eps_pair(xj, xi))
        est = estimate_pair_ldp(mech, xi, xj, plan, child_seed(seed, i))
        rows.append({"x_i": xi, "x_j": xj, "published": published, "oracle": truth,
                     "estimate": est.epsilon_hat, "n": n, "m": m,
                     "match": abs(published - truth) <= gamma})
    return rows


def table_iii() -> list[dict]:
    rows = []
    delta = ref.TABLE_III["delta"]
    for (gamma, eps), (n_ref, n_pr, m_ref, digits) in sorted(ref.TABLE_III["cells"].items(),
                                                             key=lambda kv: (-kv[0][0], kv[0][1])):
        B = 1.0 / eps
        C = trunc_laplace_exact_c(B, UNIT)
        row = {"gamma": gamma, "eps": eps, "B": B, "C": C,
               "C_published": ref.TABLE_III["columns"][eps], "n_PR_published": n_pr,
               "m_published": m_ref, "n_TH_published": n_ref}
        try:
            plan = plan_ldp(gamma, delta, C, UNIT)
        except TheoremInapplicableError as exc:
            row.update(m=exc.hint_m, n_TH=None, status="undefined (C >= 2/W^2); m by hand",
                       match=n_ref is None and exc.hint_m == m_ref)
        else:
            row.update(m=plan.m, n_TH=plan.n, status="theoretical",
                       n_within_1pct=abs(plan.n - n_ref) <= 0.01 * n_ref,
                       match=plan.m == m_ref and n_matches(plan.n, n_ref, digits))
        rows.append(row)
    return rows


def table_iv(tol: float = 1e-10) -> list[dict]:
    mech = TruncatedLaplace(ref.TABLE_IV["B"])
    alpha = ref.TABLE_IV["alpha"]
    rows = []
    for xi, xj, published in ref.TABLE_IV["rows"]:
        if xi == xj:
            truth = 0.0
        else:
            truth = max(mechanism_renyi(mech, xi, xj, alpha, tol).value,
                        mechanism_renyi(mech, xj, xi, alpha, tol).value)
        rows.append({"x_i": xi, "x_j": xj, "published": published, "oracle": truth,
                     "match": abs(published - truth) <= 0.005})
    return rows


def table_v() -> list[dict]:
    alpha, delta = ref.TABLE_V["alpha"], ref.TABLE_V["delta"]
    rows = []
    for (gamma, B), (n_ref, n_pr, m_ref) in sorted(ref.TABLE_V["cells"].items(),
                                                   key=lambda kv: (-kv[0][0], -kv[0][1])):
        C = dict(ref.TABLE_V["columns"])[B]
        plan = plan_lrdp(alpha, gamma, delta, C, UNIT)
        rows.append({"gamma": gamma, "B": B, "C": C, "m": plan.m, "n_TH": plan.n,
                     "m_published": m_ref, "n_TH_published": n_ref, "n_PR_published": n_pr,
                     "match": plan.m == m_ref and n_matches(plan.n, n_ref, 2),
                     "status": "known discrepancy"})
    return rows


TABLES = {"I": table_i, "II": table_ii, "III": table_iii, "IV": table_iv, "V": table_v}


# ---------------------------------------------------------------------------
# Sweeps


SWEEP_N_CAP = 10**30

SWEEP_DEFAULTS = {
    "ldp": {"gamma": 0.1, "delta": 0.9, "C": 1.0},
    "lrdp": {"alpha": 2.0, "gamma": 1.0, "delta": 0.9, "C": 1.0},
}


def sweep(parameter: str, values: Iterable[float], kind: str = "ldp",
          fixed: dict | None = None, support: Interval = UNIT,
          cap: int = SWEEP_N_CAP) -> list[dict]:
    """Plan (m, n) along one parameter; infeasible points give NaN rows.

    Nothing is sampled, so the sample-size cap can sit far above what a run
    could afford.
    """
    if kind not in SWEEP_DEFAULTS:
        raise ValueError("kind must be 'ldp' or 'lrdp'")
    params = dict(SWEEP_DEFAULTS[kind])
    params.update(fixed or {})
    if parameter not in params:
        raise ValueError(f"cannot sweep {parameter!r} for {kind}")
    rows = []
    for v in values:
        p = dict(params, **{parameter: float(v)})
        try:
            if kind == "ldp":
                plan = plan_ldp(p["gamma"], p["delta"], p["C"], support, cap)
            else:
                plan = plan_lrdp(p["alpha"], p["gamma"], p["delta"], p["C"], support, cap)
        except (PlanError, ValueError) as exc:
            rows.append({"parameter": parameter, "value": float(v), "m": math.nan,
                         "n": math.nan, "log10_n": math.nan, "status": type(exc).__name__})
            continue
        rows.append({"parameter": parameter, "value": float(v), "m": plan.m, "n": plan.n,
                     "log10_n": math.log10(plan.n), "status": "ok"})
    return rows


# ---------------------------------------------------------------------------
# Repeated-run curves (success frequency vs n)


def _curve_job(r, *, estimator, mechanism, x1, x2, plan, seed, symmetric):
    est = estimator(mechanism, x1, x2, plan, child_seed(seed, r), symmetric=symmetric)
    return est.epsilon_hat


def success_curve(mechanism: Mechanism, x1, x2, plans: Sequence, truth: float, gamma: float,
                  reps: int = 100, seed: int = 0, symmetric: bool = False,
                  estimator=estimate_pair_ldp, workers: int = 1) -> list[dict]:
    """Mean/std of the estimate and the fraction within gamma of ``truth`` per plan."""
    rows = []
    for idx, plan in enumerate(plans):
        job = _partial(_curve_job, estimator=estimator, mechanism=mechanism, x1=x1, x2=x2,
                       plan=plan, seed=child_seed(seed, idx), symmetric=symmetric)
        ests = parallel_map(job, range(reps), workers)
        ok = [e for e in ests if e is not None]
        hits = [e is not None and abs(e - truth) <= gamma for e in ests]
        rows.append({"n": plan.n, "m": plan.m, "runs": reps, "failed": reps - len(ok),
                     "mean": float(np.mean(ok)) if ok else math.nan,
                     "std": float(np.std(ok)) if ok else math.nan,
                     "success_within_gamma": float(np.mean(hits)), "truth": truth})
    return rows
